#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "gfq/geometry.hpp"
#include "gfq/regimes.hpp"
#include "gfq/variance_model.hpp"

namespace gfq {

/// Process over which a Pickands/Piterbarg functional is taken. Either a
/// standard B_alpha (alpha in (0,1]; alpha = 1 is the degenerate line
/// process t N) or a premultiplied, time-changed copy of an input model.
/// The simulated functional is always exp(sup(sqrt2 Z(t) - Var Z(t) - f(t))).
struct LimitProcessSpec {
    std::optional<VarianceModel> model; // engaged for rescaled input copies
    double bm_alpha = 0.0;              // engaged (in (0,1]) when model is empty
    double premultiplier = 1.0;
    double time_change = 1.0;
    std::optional<double> drift; // the theorem's drift slope, when one applies

    static LimitProcessSpec std_bm_alpha(double alpha);
    static LimitProcessSpec rescaled(VarianceModel base, double premultiplier, double time_change);

    double sigma2(double t) const;
    /// Local power-law exponent at the origin (grid-resolution driver).
    double origin_exponent() const;
    std::string fingerprint() const;
    nlohmann::json to_json() const;

    /// v when Var Z(t) = v t exactly (Brownian family), else nullopt.
    std::optional<double> linear_rate() const;
    /// q when Var Z(t) = q t^2 exactly (line family), else nullopt.
    std::optional<double> quadratic_rate() const;
};

struct ConstantEstimate {
    double value;
    double std_error;
    double S;
    double grid_step;
    std::uint64_t replications;
    std::uint64_t seed;

    nlohmann::json to_json() const;
};

enum class ConstantKind { pickands, piterbarg, piterbarg_a, piterbarg_tilde };

std::string constant_kind_name(ConstantKind k);
ConstantKind constant_kind_from_name(const std::string& name);

/// A fully specified estimation request; also the cache key.
struct ConstantQuery {
    ConstantKind kind;
    LimitProcessSpec proc;
    double d = 0.0;
    double a = 0.0;
    double S;
    double grid_step;
    std::uint64_t reps;
    std::uint64_t seed;

    std::string cache_key() const;
    nlohmann::json to_json() const;
};

/// Raised by evaluators when a needed constant has neither a closed form
/// nor a cache entry; carries the query to run.
struct constant_required : error {
    explicit constant_required(ConstantQuery q);
    ConstantQuery query;
};

/// Process the relevant theorem's constant is taken over, per the regime:
/// B_{alpha_0} on the fine-scale side, a premultiplied time-changed copy of
/// the input in the balanced case, B_{alpha_inf} on the coarse side.
LimitProcessSpec limiting_process(const QueueSpec& spec, const RegimeClassification& cls);

/// H[0,S]/S: empirical mean of exp(sup over the grid of sqrt2 Z - Var Z),
/// divided by S. Deterministic per seed and thread-count invariant.
ConstantEstimate pickands(const LimitProcessSpec& proc, double S, double grid_step,
                          std::uint64_t reps, std::uint64_t seed,
                          double budget = 6e10);

/// E exp(sup(sqrt2 Z - Var Z - d t)) on [0,S]; no division by S.
ConstantEstimate piterbarg(const LimitProcessSpec& proc, double d, double S, double grid_step,
                           std::uint64_t reps, std::uint64_t seed, double budget = 6e10);

/// E exp(max(a, sup(sqrt2 Z - Var Z - d t))).
ConstantEstimate piterbarg_a(const LimitProcessSpec& proc, double d, double a, double S,
                             double grid_step, std::uint64_t reps, std::uint64_t seed,
                             double budget = 6e10);

/// Two independent copies; E exp(max(a + M, M + M~)) using the exact
/// factorization of the double sup over independent processes.
ConstantEstimate piterbarg_tilde(const LimitProcessSpec& proc, double d, double a, double S,
                                 double grid_step, std::uint64_t reps, std::uint64_t seed,
                                 double budget = 6e10);

struct BrownianConstants {
    double p;       // P^{dt}
    double p_a;     // P^{dt,a}
    double p_tilde; // tilde-P^{dt,a}
};

/// Closed forms over standard Brownian base from the exponential law of the
/// drifted supremum (lambda = 1 + d).
BrownianConstants brownian_constant_oracles(double d, double a);

/// Closed-form value of the requested constant when the process family
/// admits one (Brownian or line base), else nullopt.
std::optional<double> closed_form_constant(ConstantKind kind, const LimitProcessSpec& proc,
                                           double d, double a);

/// Defaults used when evaluators assemble a ConstantQuery to report.
double default_S();
double default_step(const LimitProcessSpec& proc);
std::uint64_t default_reps();

/// Reproducible store of Monte Carlo constant estimates.
class ConstantsCache {
  public:
    void insert(const ConstantQuery& q, const ConstantEstimate& e);
    std::optional<ConstantEstimate> exact(const ConstantQuery& q) const;
    /// Best entry matching (kind, process, d, a): most replications, then
    /// longest S, then finest step.
    std::optional<ConstantEstimate> find_best(ConstantKind kind, const LimitProcessSpec& proc,
                                              double d, double a) const;
    void load(const std::string& path);
    void save(const std::string& path) const;
    std::size_t size() const { return entries_.size(); }

  private:
    struct Entry {
        ConstantQuery query;
        ConstantEstimate estimate;
    };
    std::map<std::string, Entry> entries_;
};

} // namespace gfq
