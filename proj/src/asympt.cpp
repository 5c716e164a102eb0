#include "gfq/asympt.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include <nlohmann/json.hpp>

#include "gfq/errors.hpp"
#include "gfq/normal.hpp"

namespace gfq {

namespace {
constexpr double k_pi = std::numbers::pi;

bool is_short(const RegimeClassification& cls) {
    return cls.scenario == Scenario::short_omega_zero ||
           cls.scenario == Scenario::short_omega_finite ||
           cls.scenario == Scenario::short_omega_infinite;
}

bool is_t2(const RegimeClassification& cls) {
    return cls.scenario == Scenario::moderate_finite_omega ||
           cls.scenario == Scenario::long_infinite_omega;
}

double endpoint_arg(const QueueSpec& spec, double u, double T) {
    return (u - spec.x + spec.c * T) / spec.model.sigma(T);
}

double drift_slope(const QueueSpec& spec, const RegimeClassification& cls) {
    const double a = spec.model.alpha_inf();
    return a - spec.c * cls.gamma / (1.0 + spec.c * cls.gamma);
}
} // namespace

nlohmann::json ConstantUse::to_json() const {
    nlohmann::json j{{"name", name}, {"value", value}, {"source", source}};
    if (std_error) j["se"] = *std_error;
    return j;
}

nlohmann::json AsymptoticEstimate::to_json() const {
    nlohmann::json j;
    if (log_value) {
        j["log_value"] = *log_value;
        j["value"] = std::exp(*log_value);
    }
    j["formula_id"] = formula_id;
    j["regime"] = regime.to_json();
    nlohmann::json cs = nlohmann::json::array();
    for (const auto& c : constants_used) cs.push_back(c.to_json());
    j["constants_used"] = cs;
    if (sum_decomposition) {
        j["sum_decomposition"] = {sum_decomposition->first, sum_decomposition->second};
    }
    if (delegate_to_mc) j["delegate_to_mc"] = true;
    return j;
}

ConstantUse ConstantsProvider::resolve(ConstantKind kind, const LimitProcessSpec& proc, double d,
                                       double a, const std::string& name) const {
    if (const auto cf = closed_form_constant(kind, proc, d, a)) {
        return ConstantUse{name, *cf, "closed-form", std::nullopt};
    }
    if (cache_) {
        if (const auto hit = cache_->find_best(kind, proc, d, a)) {
            return ConstantUse{name, hit->value, "cache", hit->std_error};
        }
    }
    ConstantQuery q;
    q.kind = kind;
    q.proc = proc;
    q.d = d;
    q.a = a;
    q.S = default_S();
    q.grid_step = default_step(proc);
    q.reps = default_reps();
    q.seed = 1;
    throw constant_required(std::move(q));
}

AsymptoticEstimate approx_fixed_T(const QueueSpec& spec, double T, double u) {
    if (!(spec.x > 0.0)) {
        throw validation_error(
            "unsupported-branch: the fixed-horizon point formula requires x > 0");
    }
    if (!(T > 0.0) || !(u > 0.0)) throw validation_error("approx_fixed_T: T and u must be positive");
    AsymptoticEstimate est;
    est.log_value = gauss_tail_log(endpoint_arg(spec, u, T));
    est.formula_id = "fixed-point-endpoint";
    est.regime = classify(spec, HorizonFamily::fixed(T));
    return est;
}

AsymptoticEstimate approx_fixed_T_sup(const QueueSpec& spec, double T, double u) {
    if (!(T > 0.0) || !(u > 0.0)) throw validation_error("approx_fixed_T_sup: T and u must be positive");
    AsymptoticEstimate est;
    est.formula_id = "fixed-sup-mc";
    est.regime = classify(spec, HorizonFamily::fixed(T));
    est.delegate_to_mc = true;
    return est;
}

namespace {

struct Eval {
    double log_value;
    std::string id;
    std::vector<ConstantUse> constants;
};

/// Short-horizon empty-queue point display at a given level (no x shift).
Eval eval_short_empty(const QueueSpec& spec, const RegimeClassification& cls, double level,
                      double T, const ConstantsProvider& provider, bool sup_variant) {
    const double m = m_boundary(spec, level, T);
    const double psi = gauss_tail_log(m);
    const double power = sup_variant ? 2.0 : 1.0;
    Eval ev;
    switch (cls.scenario) {
        case Scenario::short_omega_zero: {
            const auto proc = LimitProcessSpec::std_bm_alpha(spec.model.alpha0());
            const auto h = provider.resolve(ConstantKind::pickands, proc, 0.0, 0.0,
                                            "pickands[fine-scale]");
            const double slope = drift_slope(spec, cls);
            ev.log_value =
                power * (std::log(h.value) - std::log(slope) - std::log(omega_ratio(spec, level, T))) +
                psi;
            ev.id = sup_variant ? "short-sup-prefactor" : "short-point-prefactor";
            ev.constants.push_back(h);
            break;
        }
        case Scenario::short_omega_finite: {
            auto proc = limiting_process(spec, cls);
            const double d = cls.omega_inf * drift_slope(spec, cls);
            proc.drift = d;
            const auto p =
                provider.resolve(ConstantKind::piterbarg, proc, d, 0.0, "piterbarg[window]");
            ev.log_value = power * std::log(p.value) + psi;
            ev.id = sup_variant ? "short-sup-piterbarg" : "short-point-piterbarg";
            ev.constants.push_back(p);
            break;
        }
        case Scenario::short_omega_infinite: {
            ev.log_value = psi;
            ev.id = sup_variant ? "short-sup-bare" : "short-point-bare";
            break;
        }
        default:
            throw validation_error("short-horizon evaluator called outside a short regime");
    }
    return ev;
}

/// Moderate/long empty-queue point display at a given level.
Eval eval_moderate_point(const QueueSpec& spec, const RegimeClassification& cls, double level,
                         const ConstantsProvider& provider) {
    const double a = spec.model.alpha_inf();
    const double ainf = spec.model.a_inf();
    const double ts = t_star(spec);
    const auto [A, B] = ab_constants(spec);
    const double t_l = t_peak(spec, level);
    const double m = m_boundary(spec, level, t_l);
    const double dl = delta_scale(spec, level, t_l);
    const auto proc = limiting_process(spec, cls);
    const auto h = provider.resolve(ConstantKind::pickands, proc, 0.0, 0.0, "pickands[peak-scale]");
    double phi_factor_log = 0.0;
    if (!std::isinf(cls.omega)) {
        const double z = std::sqrt(B / (A * ainf)) * (1.0 + spec.c * ts) * cls.omega /
                         std::pow(ts, a);
        phi_factor_log = gauss_cdf_log(z);
    }
    Eval ev;
    ev.log_value = std::log(h.value) + 0.5 * std::log(2.0 * A * k_pi / B) + std::log(level) -
                   std::log(m) - std::log(dl) + phi_factor_log + gauss_tail_log(m);
    ev.id = "moderate-point";
    ev.constants.push_back(h);
    return ev;
}

/// Moderate/long empty-queue sup display at a given level. When
/// `full_interval` is set the elapsed-window factor T - t_u is replaced by T.
Eval eval_moderate_sup(const QueueSpec& spec, const RegimeClassification& cls, double level,
                       double T, const ConstantsProvider& provider, bool full_interval = false) {
    if (!cls.t3_satisfied) {
        throw regime_error("T3-violation: the sup probability does not vanish for this horizon");
    }
    const double a = spec.model.alpha_inf();
    const double ainf = spec.model.a_inf();
    const double ts = t_star(spec);
    const auto [A, B] = ab_constants(spec);
    const double t_l = t_peak(spec, level);
    const double m = m_boundary(spec, level, t_l);
    const double dl = delta_scale(spec, level, t_l);
    const auto proc = limiting_process(spec, cls);
    const auto h = provider.resolve(ConstantKind::pickands, proc, 0.0, 0.0, "pickands[peak-scale]");
    Eval ev;
    ev.constants.push_back(h);
    if (!std::isinf(cls.omega) && !full_interval) {
        const double z0 = std::sqrt(B / (2.0 * A * ainf)) * (1.0 + spec.c * ts) * cls.omega /
                          std::pow(ts, a);
        ev.log_value = 2.0 * std::log(h.value) + std::log(2.0 * A / B) +
                       2.0 * (std::log(level) - std::log(m) - std::log(dl)) +
                       log_window_integral(z0) + gauss_tail_log(m);
        ev.id = "moderate-sup-window";
        return ev;
    }
    const double window = full_interval ? T : T - t_l;
    if (!(window > 0.0)) {
        throw numeric_error("moderate-sup: horizon below the peak epoch at this u; "
                            "the long-horizon display does not apply yet");
    }
    ev.log_value = 2.0 * std::log(h.value) + 0.5 * std::log(2.0 * A * k_pi / B) +
                   std::log(window) + std::log(level) - std::log(m) - 2.0 * std::log(dl) +
                   gauss_tail_log(m);
    ev.id = full_interval ? "moderate-sup-full-interval" : "moderate-sup-linear";
    return ev;
}

AsymptoticEstimate wrap(Eval ev, RegimeClassification cls) {
    AsymptoticEstimate est;
    est.log_value = ev.log_value;
    est.formula_id = std::move(ev.id);
    est.regime = std::move(cls);
    est.constants_used = std::move(ev.constants);
    return est;
}

void require_level_above_backlog(double u, double x) {
    if (!(u > x)) {
        throw validation_error("shifted-level display needs u > x");
    }
}

} // namespace

AsymptoticEstimate approx_short_empty(const QueueSpec& spec, const HorizonFamily& family, double u,
                                      const ConstantsProvider& provider) {
    const auto cls = classify(spec, family);
    if (!is_short(cls)) throw validation_error("approx_short_empty: family is not short-horizon");
    const double T = horizon_value(family, spec, u);
    return wrap(eval_short_empty(spec, cls, u, T, provider, false), cls);
}

AsymptoticEstimate approx_short_empty_sup(const QueueSpec& spec, const HorizonFamily& family,
                                          double u, const ConstantsProvider& provider) {
    const auto cls = classify(spec, family);
    if (!is_short(cls)) throw validation_error("approx_short_empty_sup: family is not short-horizon");
    const double T = horizon_value(family, spec, u);
    return wrap(eval_short_empty(spec, cls, u, T, provider, true), cls);
}

AsymptoticEstimate approx_short_x(const QueueSpec& spec, const HorizonFamily& family, double u,
                                  const ConstantsProvider& provider) {
    const auto cls = classify(spec, family);
    if (!is_short(cls)) throw validation_error("approx_short_x: family is not short-horizon");
    if (!(spec.x > 0.0)) throw validation_error("approx_short_x: requires x > 0");
    const double T = horizon_value(family, spec, u);
    AsymptoticEstimate est;
    est.regime = cls;
    switch (cls.short_x_branch) {
        case ShortXBranch::phi_zero:
        case ShortXBranch::phi_finite_alpha_high:
            est.log_value = gauss_tail_log(endpoint_arg(spec, u, T));
            est.formula_id = "short-x-point-endpoint";
            return est;
        case ShortXBranch::phi_finite_alpha_half: {
            const double phi = cls.phi;
            const double ainf = spec.model.a_inf();
            const double g = 1.0 + spec.c * phi;
            const double a1 = g / (std::numbers::sqrt2 * ainf * phi);
            const double a2 = g * g / (ainf * phi * phi) *
                              (spec.model.alpha_inf() - spec.c * phi / g);
            auto proc = LimitProcessSpec::rescaled(spec.model, a1, 1.0);
            proc.drift = a2;
            const double floor = std::numbers::sqrt2 * a1 * spec.x;
            const auto p = provider.resolve(ConstantKind::piterbarg_a, proc, a2, floor,
                                            "piterbarg-a[backlog-floor]");
            est.log_value = std::log(p.value) + gauss_tail_log(m_boundary(spec, u, T));
            est.formula_id = "short-x-point-floor";
            est.constants_used.push_back(p);
            return est;
        }
        case ShortXBranch::phi_infinite: {
            auto ev = eval_short_empty(spec, cls, u, T, provider, false);
            est.log_value = ev.log_value;
            est.formula_id = "short-x-point-via-empty";
            est.constants_used = std::move(ev.constants);
            return est;
        }
        case ShortXBranch::na: break;
    }
    throw validation_error("approx_short_x: no x > 0 branch applies");
}

AsymptoticEstimate approx_short_x_sup(const QueueSpec& spec, const HorizonFamily& family, double u,
                                      const ConstantsProvider& provider) {
    const auto cls = classify(spec, family);
    if (!is_short(cls)) throw validation_error("approx_short_x_sup: family is not short-horizon");
    if (!(spec.x > 0.0)) throw validation_error("approx_short_x_sup: requires x > 0");
    const double T = horizon_value(family, spec, u);
    AsymptoticEstimate est;
    est.regime = cls;
    switch (cls.short_x_branch) {
        case ShortXBranch::phi_zero:
        case ShortXBranch::phi_finite_alpha_high: {
            require_level_above_backlog(u, spec.x);
            auto ev = eval_short_empty(spec, cls, u - spec.x, T, provider, false);
            est.log_value = ev.log_value;
            est.formula_id = "short-x-sup-shifted";
            est.constants_used = std::move(ev.constants);
            return est;
        }
        case ShortXBranch::phi_finite_alpha_half: {
            const double phi = cls.phi;
            const double ainf = spec.model.a_inf();
            const double g = 1.0 + spec.c * phi;
            const double a1 = g / (std::numbers::sqrt2 * ainf * phi);
            const double a2 = g * g / (ainf * phi * phi) *
                              (spec.model.alpha_inf() - spec.c * phi / g);
            auto proc = LimitProcessSpec::rescaled(spec.model, a1, 1.0);
            proc.drift = a2;
            const double floor = std::numbers::sqrt2 * a1 * spec.x;
            const auto p = provider.resolve(ConstantKind::piterbarg_tilde, proc, a2, floor,
                                            "piterbarg-tilde[backlog-floor]");
            est.log_value = std::log(p.value) + gauss_tail_log(m_boundary(spec, u, T));
            est.formula_id = "short-x-sup-tilde";
            est.constants_used.push_back(p);
            return est;
        }
        case ShortXBranch::phi_infinite: {
            auto ev = eval_short_empty(spec, cls, u, T, provider, true);
            est.log_value = ev.log_value;
            est.formula_id = "short-x-sup-via-empty";
            est.constants_used = std::move(ev.constants);
            return est;
        }
        case ShortXBranch::na: break;
    }
    throw validation_error("approx_short_x_sup: no x > 0 branch applies");
}

AsymptoticEstimate approx_moderate_empty(const QueueSpec& spec, const HorizonFamily& family,
                                         double u, const ConstantsProvider& provider) {
    const auto cls = classify(spec, family);
    if (!is_t2(cls)) throw validation_error("approx_moderate_empty: family is not moderate/long");
    return wrap(eval_moderate_point(spec, cls, u, provider), cls);
}

AsymptoticEstimate approx_moderate_empty_sup(const QueueSpec& spec, const HorizonFamily& family,
                                             double u, const ConstantsProvider& provider) {
    const auto cls = classify(spec, family);
    if (!is_t2(cls)) throw validation_error("approx_moderate_empty_sup: family is not moderate/long");
    const double T = horizon_value(family, spec, u);
    return wrap(eval_moderate_sup(spec, cls, u, T, provider), cls);
}

AsymptoticEstimate approx_moderate_x(const QueueSpec& spec, const HorizonFamily& family, double u,
                                     const ConstantsProvider& provider) {
    const auto cls = classify(spec, family);
    if (!is_t2(cls)) throw validation_error("approx_moderate_x: family is not moderate/long");
    if (!(spec.x > 0.0)) throw validation_error("approx_moderate_x: requires x > 0");
    AsymptoticEstimate est;
    est.regime = cls;
    const double T = horizon_value(family, spec, u);
    switch (cls.nth3_side) {
        case ThresholdSide::delegated: {
            auto ev = eval_moderate_point(spec, cls, u, provider);
            est.log_value = ev.log_value;
            est.formula_id = "moderate-x-point-via-empty";
            est.constants_used = std::move(ev.constants);
            return est;
        }
        case ThresholdSide::below:
            est.log_value = gauss_tail_log(endpoint_arg(spec, u, T));
            est.formula_id = "moderate-x-point-endpoint";
            return est;
        case ThresholdSide::above: {
            auto ev = eval_moderate_point(spec, cls, u, provider);
            est.log_value = ev.log_value;
            est.formula_id = "moderate-x-point-via-empty";
            est.constants_used = std::move(ev.constants);
            return est;
        }
        case ThresholdSide::equal: {
            const double lhs = gauss_tail_log(endpoint_arg(spec, u, T));
            auto ev = eval_moderate_point(spec, cls, u, provider);
            est.sum_decomposition = {lhs, ev.log_value};
            est.log_value = log_sum_exp(lhs, ev.log_value);
            est.formula_id = "moderate-x-point-sum";
            est.constants_used = std::move(ev.constants);
            return est;
        }
        case ThresholdSide::na: break;
    }
    throw validation_error("approx_moderate_x: vartheta comparison unavailable (family lacks the "
                           "sqrt(u) offset scale)");
}

AsymptoticEstimate approx_moderate_x_sup(const QueueSpec& spec, const HorizonFamily& family,
                                         double u, const ConstantsProvider& provider) {
    const auto cls = classify(spec, family);
    if (!is_t2(cls)) throw validation_error("approx_moderate_x_sup: family is not moderate/long");
    if (!(spec.x > 0.0)) throw validation_error("approx_moderate_x_sup: requires x > 0");
    AsymptoticEstimate est;
    est.regime = cls;
    const double T = horizon_value(family, spec, u);
    switch (cls.nth4_side) {
        case ThresholdSide::delegated: {
            auto ev = eval_moderate_sup(spec, cls, u, T, provider);
            est.log_value = ev.log_value;
            est.formula_id = "moderate-x-sup-via-empty";
            est.constants_used = std::move(ev.constants);
            return est;
        }
        case ThresholdSide::below: {
            require_level_above_backlog(u, spec.x);
            auto ev = eval_moderate_point(spec, cls, u - spec.x, provider);
            est.log_value = ev.log_value;
            est.formula_id = "moderate-x-sup-shifted";
            est.constants_used = std::move(ev.constants);
            return est;
        }
        case ThresholdSide::above: {
            auto ev = eval_moderate_sup(spec, cls, u, T, provider);
            est.log_value = ev.log_value;
            est.formula_id = "moderate-x-sup-via-empty";
            est.constants_used = std::move(ev.constants);
            return est;
        }
        case ThresholdSide::equal: {
            require_level_above_backlog(u, spec.x);
            auto shifted = eval_moderate_point(spec, cls, u - spec.x, provider);
            auto sup = eval_moderate_sup(spec, cls, u, T, provider);
            est.sum_decomposition = {shifted.log_value, sup.log_value};
            est.log_value = log_sum_exp(shifted.log_value, sup.log_value);
            est.formula_id = "moderate-x-sup-sum";
            est.constants_used = std::move(shifted.constants);
            for (auto& c : sup.constants) est.constants_used.push_back(std::move(c));
            return est;
        }
        case ThresholdSide::na: break;
    }
    throw validation_error("approx_moderate_x_sup: log-threshold comparison unavailable");
}

double shift_exponent(const QueueSpec& spec, double u, double x) {
    if (!(u > x) || x < 0.0) throw validation_error("shift_exponent: need u > x >= 0");
    if (x == 0.0) return 0.0;
    const double m_u = m_boundary(spec, u, t_peak(spec, u));
    const double m_s = m_boundary(spec, u - x, t_peak(spec, u - x));
    return 0.5 * (m_u * m_u - m_s * m_s);
}

double log_window_integral(double z0) {
    if (z0 < -8.0) {
        // int_{-inf}^{z0} Phi(sqrt2 z) dz = z0 Phi(sqrt2 z0) + phi(sqrt2 z0)/sqrt2
        //                                ~ phi(sqrt2 z0) / (2 sqrt2 z0^2)
        return 0.5 * std::log(k_pi) - z0 * z0 - 0.5 * std::log(2.0 * k_pi) -
               std::log(2.0 * std::numbers::sqrt2 * z0 * z0);
    }
    return std::log(window_integral(z0));
}

double window_integral(double z0) {
    const double lo = std::min(z0, 0.0) - 12.0;
    auto f = [](double z) { return gauss_cdf(std::numbers::sqrt2 * z); };
    std::function<double(double, double, double, double, double, double)> rec =
        [&](double a, double b, double fa, double fm, double fb, double tol) -> double {
        const double mid = 0.5 * (a + b);
        const double fl = f(0.5 * (a + mid)), fr = f(0.5 * (mid + b));
        const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        const double left = (mid - a) / 6.0 * (fa + 4.0 * fl + fm);
        const double right = (b - mid) / 6.0 * (fm + 4.0 * fr + fb);
        if (std::abs(left + right - whole) < 15.0 * tol || b - a < 1e-11) {
            return left + right + (left + right - whole) / 15.0;
        }
        return rec(a, mid, fa, fl, fm, tol / 2.0) + rec(mid, b, fm, fr, fb, tol / 2.0);
    };
    const double integral = rec(lo, z0, f(lo), f(0.5 * (lo + z0)), f(z0), 1e-12);
    return std::sqrt(k_pi) * integral;
}

AsymptoticEstimate full_interval_sup_reference(const QueueSpec& spec, const HorizonFamily& family,
                                               double u, const ConstantsProvider& provider) {
    const auto cls = classify(spec, family);
    if (!is_t2(cls)) {
        throw validation_error("full_interval_sup_reference: family is not moderate/long");
    }
    const double T = horizon_value(family, spec, u);
    return wrap(eval_moderate_sup(spec, cls, u, T, provider, /*full_interval=*/true), cls);
}

nlohmann::json StationaryReport::to_json() const {
    return {{"point_relation", point_relation},
            {"point_factor", point_factor},
            {"sup_relation", sup_relation},
            {"sup_factor", sup_factor},
            {"degenerate_prefactor", degenerate_prefactor}};
}

StationaryReport stationary_ratio(const QueueSpec& spec, const HorizonFamily& family) {
    const auto cls = classify(spec, family);
    StationaryReport rep{"n/a", 1.0, "n/a", 1.0, false};
    if (!is_t2(cls)) {
        rep.point_relation = "n/a-short";
        rep.sup_relation = "n/a-short";
        return rep;
    }
    const double a = spec.model.alpha_inf();
    const double ainf = spec.model.a_inf();
    const double ts = t_star(spec);
    const auto [A, B] = ab_constants(spec);

    auto phi_factor = [&]() {
        if (std::isinf(cls.omega)) return 1.0;
        return gauss_cdf(std::sqrt(B / (A * ainf)) * (1.0 + spec.c * ts) * cls.omega /
                         std::pow(ts, a));
    };

    if (spec.x == 0.0 || a >= 0.5) {
        rep.point_relation = "factor";
        rep.point_factor = phi_factor();
    } else {
        switch (cls.nth3_side) {
            case ThresholdSide::below: rep.point_relation = "transient-dominates"; break;
            case ThresholdSide::above: rep.point_relation = "equivalent"; break;
            case ThresholdSide::equal: rep.point_relation = "boundary"; break;
            default: rep.point_relation = "n/a"; break;
        }
    }

    if (spec.x == 0.0 || a >= 0.5) {
        // factor (gamma - t*)^+ / gamma against the stationary sup quantity
        rep.sup_relation = "factor";
        if (std::isinf(cls.gamma)) {
            rep.sup_factor = 1.0;
        } else {
            const double num = std::max(cls.gamma - ts, 0.0);
            rep.sup_factor = num / cls.gamma;
            if (num == 0.0) rep.degenerate_prefactor = true;
        }
    } else {
        switch (cls.nth4_side) {
            case ThresholdSide::below: rep.sup_relation = "transient-dominates"; break;
            case ThresholdSide::above: rep.sup_relation = "equivalent"; break;
            case ThresholdSide::equal: rep.sup_relation = "boundary"; break;
            default: rep.sup_relation = "n/a"; break;
        }
    }
    return rep;
}

AsymptoticEstimate approx_dispatch(const QueueSpec& spec, const HorizonFamily& family, double u,
                                   Target target, const ConstantsProvider& provider) {
    const auto cls = classify(spec, family);
    if (cls.scenario == Scenario::fixed_horizon) {
        const double T = horizon_value(family, spec, u);
        return target == Target::point ? approx_fixed_T(spec, T, u) : approx_fixed_T_sup(spec, T, u);
    }
    if (is_short(cls)) {
        if (spec.x == 0.0) {
            return target == Target::point ? approx_short_empty(spec, family, u, provider)
                                           : approx_short_empty_sup(spec, family, u, provider);
        }
        return target == Target::point ? approx_short_x(spec, family, u, provider)
                                       : approx_short_x_sup(spec, family, u, provider);
    }
    if (spec.x == 0.0) {
        return target == Target::point ? approx_moderate_empty(spec, family, u, provider)
                                       : approx_moderate_empty_sup(spec, family, u, provider);
    }
    return target == Target::point ? approx_moderate_x(spec, family, u, provider)
                                   : approx_moderate_x_sup(spec, family, u, provider);
}

} // namespace gfq
