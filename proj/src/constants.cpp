#include "gfq/constants.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <vector>

#include <nlohmann/json.hpp>

#include "gfq/errors.hpp"
#include "gfq/normal.hpp"
#include "gfq/simulate.hpp"
#include "gfq/threading.hpp"

namespace gfq {

LimitProcessSpec LimitProcessSpec::std_bm_alpha(double alpha) {
    if (!(alpha > 0.0) || !(alpha <= 1.0)) {
        throw validation_error("limiting process B_alpha needs alpha in (0,1]");
    }
    LimitProcessSpec p;
    p.bm_alpha = alpha;
    return p;
}

LimitProcessSpec LimitProcessSpec::rescaled(VarianceModel base, double premultiplier,
                                            double time_change) {
    if (!(premultiplier > 0.0) || !(time_change > 0.0)) {
        throw validation_error("limiting process scaling must be positive");
    }
    LimitProcessSpec p;
    p.model = std::move(base);
    p.premultiplier = premultiplier;
    p.time_change = time_change;
    return p;
}

double LimitProcessSpec::sigma2(double t) const {
    const double pre2 = premultiplier * premultiplier;
    if (model) return pre2 * model->sigma2(time_change * t);
    return pre2 * std::pow(time_change * t, 2.0 * bm_alpha);
}

double LimitProcessSpec::origin_exponent() const {
    return model ? model->alpha0() : bm_alpha;
}

std::string LimitProcessSpec::fingerprint() const {
    std::ostringstream os;
    os.precision(17);
    if (model) {
        os << model->fingerprint();
    } else {
        os << "B:" << bm_alpha;
    }
    os << ":pre=" << premultiplier << ":tc=" << time_change;
    return os.str();
}

nlohmann::json LimitProcessSpec::to_json() const {
    nlohmann::json j;
    if (model) {
        j["base"] = model->to_json();
    } else {
        j["base"] = {{"kind", "std_bm"}, {"alpha", bm_alpha}};
    }
    j["premultiplier"] = premultiplier;
    j["time_change"] = time_change;
    if (drift) j["drift"] = *drift;
    return j;
}

std::optional<double> LimitProcessSpec::linear_rate() const {
    const double pre2 = premultiplier * premultiplier;
    if (model) {
        if (model->is_fbm() && model->as_fbm().hurst == 0.5) {
            return pre2 * model->as_fbm().scale * time_change;
        }
        return std::nullopt;
    }
    if (bm_alpha == 0.5) return pre2 * time_change;
    return std::nullopt;
}

std::optional<double> LimitProcessSpec::quadratic_rate() const {
    if (!model && bm_alpha == 1.0) {
        return premultiplier * premultiplier * time_change * time_change;
    }
    return std::nullopt;
}

nlohmann::json ConstantEstimate::to_json() const {
    return {{"value", value},   {"se", std_error},     {"S", S},
            {"step", grid_step}, {"reps", replications}, {"seed", seed}};
}

std::string constant_kind_name(ConstantKind k) {
    switch (k) {
        case ConstantKind::pickands: return "pickands";
        case ConstantKind::piterbarg: return "piterbarg";
        case ConstantKind::piterbarg_a: return "piterbarg-a";
        case ConstantKind::piterbarg_tilde: return "piterbarg-tilde";
    }
    return "?";
}

ConstantKind constant_kind_from_name(const std::string& name) {
    if (name == "pickands") return ConstantKind::pickands;
    if (name == "piterbarg") return ConstantKind::piterbarg;
    if (name == "piterbarg-a") return ConstantKind::piterbarg_a;
    if (name == "piterbarg-tilde") return ConstantKind::piterbarg_tilde;
    throw validation_error("unknown constant kind: " + name);
}

std::string ConstantQuery::cache_key() const {
    std::ostringstream os;
    os.precision(17);
    os << constant_kind_name(kind) << "|" << proc.fingerprint() << "|d=" << d << "|a=" << a
       << "|S=" << S << "|h=" << grid_step << "|R=" << reps << "|seed=" << seed;
    return os.str();
}

nlohmann::json ConstantQuery::to_json() const {
    return {{"kind", constant_kind_name(kind)},
            {"process", proc.to_json()},
            {"d", d},
            {"a", a},
            {"S", S},
            {"step", grid_step},
            {"reps", reps},
            {"seed", seed}};
}

constant_required::constant_required(ConstantQuery q)
    : error("constant-required: no closed form and no cache entry; run: " + q.to_json().dump()),
      query(std::move(q)) {}

LimitProcessSpec limiting_process(const QueueSpec& spec, const RegimeClassification& cls) {
    const double a = spec.model.alpha_inf();
    const double ainf = spec.model.a_inf();
    switch (cls.scenario) {
        case Scenario::fixed_horizon:
            throw validation_error("limiting_process: fixed horizons use no limit constant");
        case Scenario::short_omega_zero:
        case Scenario::short_omega_finite:
        case Scenario::short_omega_infinite: {
            if (cls.phi == 0.0) return LimitProcessSpec::std_bm_alpha(spec.model.alpha0());
            if (std::isinf(cls.phi)) return LimitProcessSpec::std_bm_alpha(a);
            const double g = 1.0 + spec.c * cls.gamma;
            const double v = std::sqrt(2.0) * ainf * std::pow(cls.phi, 2.0 * a) / g;
            return LimitProcessSpec::rescaled(spec.model, 1.0 / v, spec.model.sigma_inverse(v));
        }
        case Scenario::moderate_finite_omega:
        case Scenario::long_infinite_omega: {
            if (a < 0.5) return LimitProcessSpec::std_bm_alpha(spec.model.alpha0());
            if (a > 0.5) return LimitProcessSpec::std_bm_alpha(a);
            const double ts = t_star(spec);
            const double v = std::sqrt(2.0) * ainf * ts / (1.0 + spec.c * ts);
            return LimitProcessSpec::rescaled(spec.model, 1.0 / v, spec.model.sigma_inverse(v));
        }
    }
    throw validation_error("limiting_process: unknown scenario");
}

namespace {

enum class Mode { pickands, piterbarg, piterbarg_a, piterbarg_tilde };

ConstantEstimate run_functional(const LimitProcessSpec& proc, Mode mode, double d, double a,
                                double S, double step, std::uint64_t reps, std::uint64_t seed,
                                double budget) {
    if (reps < 1) throw validation_error("constants: reps must be >= 1");
    if (S < 0.0) throw validation_error("constants: S must be nonnegative");
    if (S == 0.0) {
        // sup over the single grid point t=0, where the centered functional is 0
        const double v = std::exp(std::max(a, 0.0));
        return ConstantEstimate{mode == Mode::piterbarg_a || mode == Mode::piterbarg_tilde
                                    ? v
                                    : 1.0,
                                0.0, S, step, reps, seed};
    }
    if (!(step > 0.0)) throw validation_error("constants: grid_step must be positive");
    const double n_real = S / step;
    const auto n = static_cast<std::size_t>(std::llround(n_real));
    if (n < 1 || std::abs(n_real - static_cast<double>(n)) > 1e-9 * std::max(1.0, n_real)) {
        throw validation_error("constants: grid_step must divide S");
    }
    const double copies = mode == Mode::piterbarg_tilde ? 2.0 : 1.0;
    if (copies * static_cast<double>(reps) * static_cast<double>(n) > budget) {
        throw budget_error("constants: reps * S / grid_step exceeds the configured budget");
    }

    FgnSampler sampler([&](double t) { return proc.sigma2(t); }, n, step, proc.fingerprint());

    // penalty(t_i) = Var Z(t_i) + d t_i at grid points t_1..t_n
    std::vector<double> penalty(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i + 1) * step;
        penalty[i] = proc.sigma2(t) + d * t;
    }

    const std::uint64_t n_blocks = (reps + k_block_len - 1) / k_block_len;
    std::vector<double> block_sum(n_blocks, 0.0), block_sumsq(n_blocks, 0.0);
    constexpr double sqrt2 = std::numbers::sqrt2;

    parallel_blocks(n_blocks, [&](std::size_t b) {
        FgnSampler::Workspace ws;
        std::vector<double> inc;
        double sum = 0.0, sumsq = 0.0;
        const std::uint64_t lo = static_cast<std::uint64_t>(b) * k_block_len;
        const std::uint64_t hi = std::min<std::uint64_t>(lo + k_block_len, reps);
        for (std::uint64_t rep = lo; rep < hi; ++rep) {
            auto grid_sup = [&](std::uint64_t lane) {
                Rng rng = Rng::substream(seed, rep, lane);
                sampler.sample(rng, ws, inc);
                double xsum = 0.0;
                double m = 0.0; // t = 0 term
                for (std::size_t i = 0; i < n; ++i) {
                    xsum += inc[i];
                    const double v = sqrt2 * xsum - penalty[i];
                    if (v > m) m = v;
                }
                return m;
            };
            const double m0 = grid_sup(0);
            double val;
            switch (mode) {
                case Mode::pickands:
                case Mode::piterbarg: val = std::exp(m0); break;
                case Mode::piterbarg_a: val = std::exp(std::max(a, m0)); break;
                case Mode::piterbarg_tilde: {
                    const double m1 = grid_sup(1);
                    val = std::exp(std::max(a + m0, m0 + m1));
                    break;
                }
            }
            sum += val;
            sumsq += val * val;
        }
        block_sum[b] = sum;
        block_sumsq[b] = sumsq;
    });

    // fixed-order reduction keeps totals identical for every thread count
    double sum = 0.0, sumsq = 0.0;
    for (std::uint64_t b = 0; b < n_blocks; ++b) {
        sum += block_sum[b];
        sumsq += block_sumsq[b];
    }
    const double r = static_cast<double>(reps);
    double mean = sum / r;
    double var = std::max(0.0, sumsq / r - mean * mean);
    double se = reps > 1 ? std::sqrt(var / (r - 1.0)) : 0.0;
    if (mode == Mode::pickands) {
        mean /= S;
        se /= S;
    }
    return ConstantEstimate{mean, se, S, step, reps, seed};
}

double require_positive_drift(double d) {
    if (!(d > 0.0)) throw validation_error("Brownian constant oracle needs d > 0");
    return d;
}

/// E exp(max(a, M)) for M ~ Exp(lambda), lambda > 1.
double exp_law_floor(double lambda, double a) {
    if (a <= 0.0) return lambda / (lambda - 1.0);
    return std::exp(a) + std::exp(-(lambda - 1.0) * a) / (lambda - 1.0);
}

/// P^{d t} over the line process t N: Phi(d/sqrt2) + e^{-d^2/4}/(d sqrt(pi)).
double line_piterbarg(double d) {
    return gauss_cdf(d / std::numbers::sqrt2) +
           std::exp(-0.25 * d * d) / (d * std::sqrt(std::numbers::pi));
}

/// E exp(max(a, M)) for the line process sup law, via
/// e^a + int_a^inf e^z P(M > z) dz with P(M > z) = Psi((d + 2 sqrt z)/sqrt2).
double line_piterbarg_floor(double d, double a) {
    if (a <= 0.0) return line_piterbarg(d);
    // substitute z = y^2; integrand decays like e^{-sqrt2 d y}
    auto f = [&](double y) {
        const double lg = gauss_tail_log((d + 2.0 * y) / std::numbers::sqrt2);
        return 2.0 * y * std::exp(y * y + lg);
    };
    const double y0 = std::sqrt(a);
    const double y1 = y0 + 60.0 / d + 10.0;
    // adaptive Simpson
    std::function<double(double, double, double, double, double, double)> rec =
        [&](double lo, double hi, double flo, double fmid, double fhi, double tol) -> double {
        const double mid = 0.5 * (lo + hi);
        const double lmid = 0.5 * (lo + mid), rmid = 0.5 * (mid + hi);
        const double fl = f(lmid), fr = f(rmid);
        const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
        const double left = (mid - lo) / 6.0 * (flo + 4.0 * fl + fmid);
        const double right = (hi - mid) / 6.0 * (fmid + 4.0 * fr + fhi);
        if (std::abs(left + right - whole) < 15.0 * tol || hi - lo < 1e-12) {
            return left + right + (left + right - whole) / 15.0;
        }
        return rec(lo, mid, flo, fl, fmid, tol / 2.0) + rec(mid, hi, fmid, fr, fhi, tol / 2.0);
    };
    const double integral = rec(y0, y1, f(y0), f(0.5 * (y0 + y1)), f(y1), 1e-13);
    return std::exp(a) + integral;
}

} // namespace

ConstantEstimate pickands(const LimitProcessSpec& proc, double S, double grid_step,
                          std::uint64_t reps, std::uint64_t seed, double budget) {
    return run_functional(proc, Mode::pickands, 0.0, 0.0, S, grid_step, reps, seed, budget);
}

ConstantEstimate piterbarg(const LimitProcessSpec& proc, double d, double S, double grid_step,
                           std::uint64_t reps, std::uint64_t seed, double budget) {
    if (d < 0.0) throw validation_error("piterbarg: drift must be nonnegative");
    return run_functional(proc, Mode::piterbarg, d, 0.0, S, grid_step, reps, seed, budget);
}

ConstantEstimate piterbarg_a(const LimitProcessSpec& proc, double d, double a, double S,
                             double grid_step, std::uint64_t reps, std::uint64_t seed,
                             double budget) {
    if (d < 0.0) throw validation_error("piterbarg_a: drift must be nonnegative");
    return run_functional(proc, Mode::piterbarg_a, d, a, S, grid_step, reps, seed, budget);
}

ConstantEstimate piterbarg_tilde(const LimitProcessSpec& proc, double d, double a, double S,
                                 double grid_step, std::uint64_t reps, std::uint64_t seed,
                                 double budget) {
    if (d < 0.0) throw validation_error("piterbarg_tilde: drift must be nonnegative");
    return run_functional(proc, Mode::piterbarg_tilde, d, a, S, grid_step, reps, seed, budget);
}

BrownianConstants brownian_constant_oracles(double d, double a) {
    const double lambda = 1.0 + require_positive_drift(d);
    const double p = lambda / (lambda - 1.0);
    const double pa = exp_law_floor(lambda, a);
    return BrownianConstants{p, pa, p * pa};
}

std::optional<double> closed_form_constant(ConstantKind kind, const LimitProcessSpec& proc,
                                           double d, double a) {
    if (const auto v = proc.linear_rate()) {
        if (kind == ConstantKind::pickands) return *v;
        if (!(d > 0.0)) return std::nullopt;
        const double lambda = 1.0 + d / *v;
        switch (kind) {
            case ConstantKind::piterbarg: return lambda / (lambda - 1.0);
            case ConstantKind::piterbarg_a: return exp_law_floor(lambda, a);
            case ConstantKind::piterbarg_tilde:
                return lambda / (lambda - 1.0) * exp_law_floor(lambda, a);
            default: break;
        }
    }
    if (const auto q = proc.quadratic_rate()) {
        if (kind == ConstantKind::pickands) {
            return std::sqrt(*q) / std::sqrt(std::numbers::pi);
        }
        if (!(d > 0.0)) return std::nullopt;
        const double d_eff = d / std::sqrt(*q);
        switch (kind) {
            case ConstantKind::piterbarg: return line_piterbarg(d_eff);
            case ConstantKind::piterbarg_a: return line_piterbarg_floor(d_eff, a);
            case ConstantKind::piterbarg_tilde:
                return line_piterbarg(d_eff) * line_piterbarg_floor(d_eff, a);
            default: break;
        }
    }
    return std::nullopt;
}

double default_S() { return 64.0; }

double default_step(const LimitProcessSpec& proc) {
    return proc.origin_exponent() >= 0.5 ? 0x1.0p-9 : 0x1.0p-12;
}

std::uint64_t default_reps() { return 100000; }

void ConstantsCache::insert(const ConstantQuery& q, const ConstantEstimate& e) {
    entries_[q.cache_key()] = Entry{q, e};
}

std::optional<ConstantEstimate> ConstantsCache::exact(const ConstantQuery& q) const {
    const auto it = entries_.find(q.cache_key());
    if (it == entries_.end()) return std::nullopt;
    return it->second.estimate;
}

std::optional<ConstantEstimate> ConstantsCache::find_best(ConstantKind kind,
                                                          const LimitProcessSpec& proc, double d,
                                                          double a) const {
    const std::string fp = proc.fingerprint();
    const ConstantEstimate* best = nullptr;
    for (const auto& [_, entry] : entries_) {
        const auto& q = entry.query;
        if (q.kind != kind || q.d != d || q.proc.fingerprint() != fp) continue;
        if (kind != ConstantKind::pickands && kind != ConstantKind::piterbarg && q.a != a) continue;
        if (!best || q.reps > best->replications ||
            (q.reps == best->replications &&
             (q.S > best->S || (q.S == best->S && q.grid_step < best->grid_step)))) {
            best = &entry.estimate;
        }
    }
    if (!best) return std::nullopt;
    return *best;
}

void ConstantsCache::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open constants cache: " + path);
    nlohmann::json j;
    in >> j;
    for (const auto& item : j.at("entries")) {
        ConstantQuery q;
        q.kind = constant_kind_from_name(item.at("kind").get<std::string>());
        const auto& pj = item.at("process");
        const auto& base = pj.at("base");
        if (base.at("kind") == "std_bm") {
            q.proc = LimitProcessSpec::std_bm_alpha(base.at("alpha").get<double>());
        } else {
            q.proc = LimitProcessSpec::rescaled(VarianceModel::from_json(base),
                                                pj.at("premultiplier").get<double>(),
                                                pj.at("time_change").get<double>());
        }
        q.d = item.at("d").get<double>();
        q.a = item.at("a").get<double>();
        q.S = item.at("S").get<double>();
        q.grid_step = item.at("step").get<double>();
        q.reps = item.at("reps").get<std::uint64_t>();
        q.seed = item.at("seed").get<std::uint64_t>();
        ConstantEstimate e{item.at("value").get<double>(), item.at("se").get<double>(),
                           q.S, q.grid_step, q.reps, q.seed};
        insert(q, e);
    }
}

void ConstantsCache::save(const std::string& path) const {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& [_, entry] : entries_) {
        nlohmann::json j = entry.query.to_json();
        j["value"] = entry.estimate.value;
        j["se"] = entry.estimate.std_error;
        entries.push_back(j);
    }
    std::ofstream out(path);
    if (!out) throw validation_error("cannot write constants cache: " + path);
    out << nlohmann::json{{"entries", entries}}.dump(1) << "\n";
}

} // namespace gfq
