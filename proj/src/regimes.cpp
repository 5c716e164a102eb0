#include "gfq/regimes.hpp"

#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "gfq/errors.hpp"

namespace gfq {

namespace {
constexpr double k_inf = std::numeric_limits<double>::infinity();
constexpr double k_na = std::numeric_limits<double>::quiet_NaN();

nlohmann::json ext_to_json(double v) {
    if (std::isnan(v)) return "n/a";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

const char* side_name(ThresholdSide s) {
    switch (s) {
        case ThresholdSide::na: return "n/a";
        case ThresholdSide::below: return "below";
        case ThresholdSide::equal: return "equal";
        case ThresholdSide::above: return "above";
        case ThresholdSide::delegated: return "delegated";
    }
    return "?";
}

const char* short_branch_name(ShortXBranch b) {
    switch (b) {
        case ShortXBranch::na: return "n/a";
        case ShortXBranch::phi_zero: return "phi-zero";
        case ShortXBranch::phi_finite_alpha_high: return "phi-finite-alpha-high";
        case ShortXBranch::phi_finite_alpha_half: return "phi-finite-alpha-half";
        case ShortXBranch::phi_infinite: return "phi-infinite";
    }
    return "?";
}
} // namespace

HorizonFamily HorizonFamily::fixed(double T) {
    if (!(T > 0.0)) throw validation_error("fixed horizon T must be positive");
    return HorizonFamily(FixedT{T});
}

HorizonFamily HorizonFamily::power(double kappa, double rho) {
    if (!(kappa > 0.0)) throw validation_error("power horizon kappa must be positive");
    if (!(rho >= 0.0)) throw validation_error("power horizon rho must be nonnegative");
    return HorizonFamily(PowerLawT{kappa, rho});
}

HorizonFamily HorizonFamily::offset(double delta, double beta) {
    if (!(beta >= 0.0)) throw validation_error("offset horizon beta must be nonnegative");
    if (!std::isfinite(delta)) throw validation_error("offset horizon delta must be finite");
    if (delta < 0.0 && beta >= 1.0) {
        throw validation_error("offset horizon with delta < 0 requires beta < 1");
    }
    return HorizonFamily(OffsetFromPeak{delta, beta});
}

HorizonFamily HorizonFamily::exp_scale(double C, bool t3_scale) {
    if (!(C > 0.0)) throw validation_error("exp horizon C must be positive");
    return HorizonFamily(ExpScaleT{C, t3_scale});
}

nlohmann::json HorizonFamily::to_json() const {
    return visit([](const auto& f) -> nlohmann::json {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, FixedT>) {
            return {{"kind", "fixed"}, {"T", f.T}};
        } else if constexpr (std::is_same_v<T, PowerLawT>) {
            return {{"kind", "power"}, {"kappa", f.kappa}, {"rho", f.rho}};
        } else if constexpr (std::is_same_v<T, OffsetFromPeak>) {
            return {{"kind", "offset"}, {"delta", f.delta}, {"beta", f.beta}};
        } else {
            return {{"kind", "exp"}, {"C", f.C}, {"t3_scale", f.t3_scale}};
        }
    });
}

HorizonFamily HorizonFamily::from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    auto reject_unknown = [&](std::initializer_list<const char*> allowed) {
        for (const auto& [key, _] : j.items()) {
            bool ok = false;
            for (const char* a : allowed) ok = ok || key == a;
            if (!ok) throw validation_error("unknown key in horizon block: " + key);
        }
    };
    if (kind == "fixed") {
        reject_unknown({"kind", "T"});
        return fixed(j.at("T").get<double>());
    }
    if (kind == "power") {
        reject_unknown({"kind", "kappa", "rho"});
        return power(j.at("kappa").get<double>(), j.at("rho").get<double>());
    }
    if (kind == "offset") {
        reject_unknown({"kind", "delta", "beta"});
        return offset(j.at("delta").get<double>(), j.at("beta").get<double>());
    }
    if (kind == "exp") {
        reject_unknown({"kind", "C", "t3_scale"});
        return exp_scale(j.at("C").get<double>(), j.value("t3_scale", false));
    }
    throw validation_error("horizon kind must be fixed|power|offset|exp");
}

std::string scenario_name(Scenario s) {
    switch (s) {
        case Scenario::fixed_horizon: return "fixed-horizon";
        case Scenario::short_omega_zero: return "short-omega-zero";
        case Scenario::short_omega_finite: return "short-omega-finite";
        case Scenario::short_omega_infinite: return "short-omega-infinite";
        case Scenario::moderate_finite_omega: return "moderate-finite-omega";
        case Scenario::long_infinite_omega: return "long-infinite-omega";
    }
    return "?";
}

nlohmann::json RegimeClassification::to_json() const {
    return {{"scenario", scenario_name(scenario)},
            {"gamma", ext_to_json(gamma)},
            {"phi", ext_to_json(phi)},
            {"omega_inf", ext_to_json(omega_inf)},
            {"omega", ext_to_json(omega)},
            {"vartheta", ext_to_json(vartheta)},
            {"short_x_branch", short_branch_name(short_x_branch)},
            {"nth3_side", side_name(nth3_side)},
            {"nth4_side", side_name(nth4_side)},
            {"nth3_threshold", ext_to_json(nth3_threshold)},
            {"nth4_threshold", ext_to_json(nth4_threshold)},
            {"nth4_log_limit", ext_to_json(nth4_log_limit)},
            {"t3_satisfied", t3_satisfied}};
}

namespace {

RegimeClassification blank_classification() {
    RegimeClassification r;
    r.scenario = Scenario::fixed_horizon;
    r.gamma = k_na;
    r.phi = k_na;
    r.omega_inf = k_na;
    r.omega = k_na;
    r.vartheta = k_na;
    r.short_x_branch = ShortXBranch::na;
    r.nth3_side = ThresholdSide::na;
    r.nth4_side = ThresholdSide::na;
    r.nth3_threshold = k_na;
    r.nth4_threshold = k_na;
    r.nth4_log_limit = k_na;
    r.t3_satisfied = true;
    return r;
}

ThresholdSide compare_threshold(double value, double threshold) {
    if (value < threshold) return ThresholdSide::below;
    if (value > threshold) return ThresholdSide::above;
    return ThresholdSide::equal;
}

/// Omega(u, T_u) limit for T_u = kappa u^rho under T1, by the power-law
/// algebra of the variance function's origin/tail exponents.
double short_omega_limit(const QueueSpec& spec, double kappa, double rho, double gamma) {
    const double a = spec.model.alpha_inf();
    const double a0 = spec.model.alpha0();
    const double ainf_c = spec.model.a_inf();
    const double g = 1.0 + spec.c * gamma;
    const double ev = 2.0 * a * rho - 1.0; // growth exponent of sqrt2 sigma^2(T_u)/(u+cT_u)
    if (ev < 0.0) {
        const double e_total = 2.0 - 2.0 * a * rho - rho + ev / a0;
        if (e_total < 0.0) return 0.0;
        if (e_total > 0.0) return k_inf;
        const double v2 = 2.0 * ainf_c * ainf_c * std::pow(kappa, 4.0 * a) / (g * g);
        return g * g / (ainf_c * std::pow(kappa, 2.0 * a + 1.0)) *
               std::pow(v2 / spec.model.a0(), 1.0 / (2.0 * a0));
    }
    if (ev == 0.0) {
        if (rho < 1.0) return k_inf;
        const double v = std::sqrt(2.0) * ainf_c * std::pow(kappa, 2.0 * a) / g;
        const double delta_star = spec.model.sigma_inverse(v);
        return g * g * delta_star / (ainf_c * std::pow(kappa, 2.0 * a + 1.0));
    }
    return k_inf;
}

} // namespace

RegimeClassification classify(const QueueSpec& spec, const HorizonFamily& family) {
    const double a = spec.model.alpha_inf();
    const double ainf_c = spec.model.a_inf();
    const double ts = t_star(spec);
    const double c = spec.c;
    const double x = spec.x;

    RegimeClassification r = blank_classification();

    // gamma = lim T_u/u and, when the family is sub-t*-linear, (kappa, rho)
    // in T_u ~ kappa u^rho form for the short-horizon algebra.
    bool is_short = false;
    bool is_fixed = false;
    double kappa = k_na, rho = k_na;

    family.visit([&](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, FixedT>) {
            is_fixed = true;
        } else if constexpr (std::is_same_v<T, PowerLawT>) {
            if (f.rho == 0.0) {
                is_fixed = true; // constant horizon in power-law clothing
            } else if (f.rho < 1.0) {
                is_short = true;
                r.gamma = 0.0;
                kappa = f.kappa;
                rho = f.rho;
            } else if (f.rho == 1.0) {
                if (f.kappa == ts) {
                    throw regime_error(
                        "boundary-regime: T_u ~ t* u is covered by neither the short- nor the "
                        "moderate-horizon theory");
                }
                if (f.kappa < ts) {
                    is_short = true;
                    r.gamma = f.kappa;
                    kappa = f.kappa;
                    rho = 1.0;
                } else {
                    r.gamma = f.kappa;
                    r.omega = k_inf;
                }
            } else {
                r.gamma = k_inf;
                r.omega = k_inf;
            }
        } else if constexpr (std::is_same_v<T, OffsetFromPeak>) {
            if (f.delta == 0.0) {
                r.gamma = ts;
                r.omega = 0.0;
            } else if (f.beta < 1.0) {
                r.gamma = ts;
                if (f.beta < a) {
                    r.omega = 0.0;
                } else if (f.beta == a) {
                    r.omega = f.delta;
                } else if (f.delta > 0.0) {
                    r.omega = k_inf;
                } else {
                    throw regime_error(
                        "boundary-regime: (T_u - t_u)/u^alpha -> -inf lies between the short- and "
                        "moderate-horizon assumptions");
                }
            } else {
                // delta > 0 here (delta < 0 with beta >= 1 rejected at construction)
                r.gamma = f.beta == 1.0 ? ts + f.delta : k_inf;
                r.omega = k_inf;
            }
        } else {
            if (!f.t3_scale && a >= 0.5) {
                throw validation_error(
                    "exp horizon requires alpha_inf < 1/2 (otherwise T_u does not diverge)");
            }
            r.gamma = k_inf;
            r.omega = k_inf;
        }
    });

    if (is_fixed) {
        r.scenario = Scenario::fixed_horizon;
        return r;
    }

    if (is_short) {
        const double inv2a = 1.0 / (2.0 * a);
        if (rho < inv2a) {
            r.phi = 0.0;
        } else if (rho == inv2a) {
            r.phi = kappa;
        } else {
            r.phi = k_inf;
        }
        r.omega_inf = std::isinf(r.phi) ? k_inf : short_omega_limit(spec, kappa, rho, r.gamma);
        if (r.omega_inf == 0.0) {
            r.scenario = Scenario::short_omega_zero;
        } else if (std::isinf(r.omega_inf)) {
            r.scenario = Scenario::short_omega_infinite;
        } else {
            r.scenario = Scenario::short_omega_finite;
        }
        if (x > 0.0) {
            if (r.phi == 0.0) {
                r.short_x_branch = ShortXBranch::phi_zero;
            } else if (std::isinf(r.phi)) {
                r.short_x_branch = ShortXBranch::phi_infinite;
            } else {
                r.short_x_branch = a > 0.5 ? ShortXBranch::phi_finite_alpha_high
                                           : ShortXBranch::phi_finite_alpha_half;
            }
        }
        return r;
    }

    // moderate / long horizon
    r.scenario = std::isinf(r.omega) ? Scenario::long_infinite_omega : Scenario::moderate_finite_omega;

    if (a < 0.5) {
        // vartheta = lim (T_u - t_u)/sqrt(u)
        if (const auto* off = family.get_if<OffsetFromPeak>()) {
            if (off->delta == 0.0 || off->beta < 0.5) {
                r.vartheta = 0.0;
            } else if (off->beta == 0.5) {
                r.vartheta = off->delta;
            } else {
                r.vartheta = off->delta > 0.0 ? k_inf : 0.0; // delta<0, beta>alpha rejected above
            }
        } else {
            r.vartheta = k_inf;
        }
    }

    // ln(T_u) growth against u^(1-2alpha) (backlog-shift scale) and
    // u^(2(1-alpha)) (vanishing-sup scale)
    double log_lim_shift = 0.0; // lim ln(T_u)/u^(1-2alpha), for alpha < 1/2
    double log_lim_t3 = 0.0;    // lim ln(T_u)/u^(2(1-alpha))
    if (const auto* ex = family.get_if<ExpScaleT>()) {
        if (ex->t3_scale) {
            log_lim_shift = k_inf;
            log_lim_t3 = ex->C;
        } else {
            log_lim_shift = ex->C;
            log_lim_t3 = 0.0;
        }
    }

    const double t3_bound = (1.0 + c * ts) * (1.0 + c * ts) / (2.0 * ainf_c * std::pow(ts, 2.0 * a));
    r.t3_satisfied = log_lim_t3 < t3_bound;
    if (!r.t3_satisfied) {
        throw regime_error("T3-violation: horizon grows too fast for the sup probability to vanish");
    }

    if (x > 0.0) {
        if (a < 0.5) {
            const auto [A, B] = ab_constants(spec);
            r.nth3_threshold = std::sqrt(2.0 * A / B * (1.0 - a) * x);
            r.nth3_side = compare_threshold(r.vartheta, r.nth3_threshold);
            r.nth4_threshold = (1.0 + c * ts) * x / (ainf_c * std::pow(ts, 2.0 * a));
            r.nth4_log_limit = log_lim_shift;
            r.nth4_side = compare_threshold(log_lim_shift, r.nth4_threshold);
        } else {
            r.nth3_side = ThresholdSide::delegated;
            r.nth4_side = ThresholdSide::delegated;
        }
    }
    return r;
}

double horizon_value(const HorizonFamily& family, const QueueSpec& spec, double u) {
    if (!(u > 0.0)) throw validation_error("horizon_value: u must be positive");
    const double T = family.visit([&](const auto& f) -> double {
        using T_ = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T_, FixedT>) {
            return f.T;
        } else if constexpr (std::is_same_v<T_, PowerLawT>) {
            return f.kappa * std::pow(u, f.rho);
        } else if constexpr (std::is_same_v<T_, OffsetFromPeak>) {
            return t_peak(spec, u) + f.delta * std::pow(u, f.beta);
        } else {
            const double a = spec.model.alpha_inf();
            const double e = f.t3_scale ? 2.0 * (1.0 - a) : 1.0 - 2.0 * a;
            const double ln_T = f.C * std::pow(u, e);
            if (ln_T > 700.0) {
                throw numeric_error("horizon_value: T_u overflows double at this u");
            }
            return std::exp(ln_T);
        }
    });
    if (!(T > 0.0)) throw validation_error("horizon_value: T_u must be positive at this u");
    return T;
}

} // namespace gfq
