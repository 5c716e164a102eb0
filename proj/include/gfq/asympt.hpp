#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "gfq/constants.hpp"
#include "gfq/geometry.hpp"
#include "gfq/regimes.hpp"

namespace gfq {

struct ConstantUse {
    std::string name;
    double value;
    std::string source; // "closed-form", "cache", "exact"
    std::optional<double> std_error;

    nlohmann::json to_json() const;
};

/// Log-scale evaluation of one asymptotic formula. log_value is absent only
/// for the fixed-horizon sup case, which the theory reduces to a quantity
/// this artifact validates by Monte Carlo instead (delegate_to_mc set).
struct AsymptoticEstimate {
    std::optional<double> log_value;
    std::string formula_id;
    RegimeClassification regime;
    std::vector<ConstantUse> constants_used;
    std::optional<std::pair<double, double>> sum_decomposition;
    bool delegate_to_mc = false;

    nlohmann::json to_json() const;
};

enum class Target { point, sup };

/// Resolves Pickands/Piterbarg constants: closed form when the limit process
/// admits one, otherwise the cache; raises constant_required with the exact
/// query when neither applies.
class ConstantsProvider {
  public:
    ConstantsProvider() = default;
    explicit ConstantsProvider(const ConstantsCache* cache) : cache_(cache) {}

    ConstantUse resolve(ConstantKind kind, const LimitProcessSpec& proc, double d, double a,
                        const std::string& name) const;

  private:
    const ConstantsCache* cache_ = nullptr;
};

/// Fixed horizon, point probability (x > 0): ln Psi((u - x + cT)/sigma(T)).
AsymptoticEstimate approx_fixed_T(const QueueSpec& spec, double T, double u);

/// Fixed horizon, sup probability: delegate-to-MC marker.
AsymptoticEstimate approx_fixed_T_sup(const QueueSpec& spec, double T, double u);

/// Short horizon, empty queue, point probability.
AsymptoticEstimate approx_short_empty(const QueueSpec& spec, const HorizonFamily& family, double u,
                                      const ConstantsProvider& provider = {});

/// Short horizon, empty queue, sup probability (squared constants).
AsymptoticEstimate approx_short_empty_sup(const QueueSpec& spec, const HorizonFamily& family,
                                          double u, const ConstantsProvider& provider = {});

/// Short horizon, positive backlog, point probability.
AsymptoticEstimate approx_short_x(const QueueSpec& spec, const HorizonFamily& family, double u,
                                  const ConstantsProvider& provider = {});

/// Short horizon, positive backlog, sup probability.
AsymptoticEstimate approx_short_x_sup(const QueueSpec& spec, const HorizonFamily& family, double u,
                                      const ConstantsProvider& provider = {});

/// Moderate/long horizon, empty queue, point probability.
AsymptoticEstimate approx_moderate_empty(const QueueSpec& spec, const HorizonFamily& family,
                                         double u, const ConstantsProvider& provider = {});

/// Moderate/long horizon, empty queue, sup probability.
AsymptoticEstimate approx_moderate_empty_sup(const QueueSpec& spec, const HorizonFamily& family,
                                             double u, const ConstantsProvider& provider = {});

/// Moderate/long horizon, positive backlog, point probability.
AsymptoticEstimate approx_moderate_x(const QueueSpec& spec, const HorizonFamily& family, double u,
                                     const ConstantsProvider& provider = {});

/// Moderate/long horizon, positive backlog, sup probability.
AsymptoticEstimate approx_moderate_x_sup(const QueueSpec& spec, const HorizonFamily& family,
                                         double u, const ConstantsProvider& provider = {});

/// (m^2(u, t_u) - m^2(u-x, t_{u-x})) / 2, the exact log-scale driver of the
/// backlog shift pi(u-x)/pi(u); both peaks computed from geometry.
double shift_exponent(const QueueSpec& spec, double u, double x);

/// ln of sqrt(pi) * int_{-inf}^{z0} Phi(sqrt2 z) dz, the window integral of
/// the finite-offset sup branch. Adaptive quadrature (abs tol 1e-12) with an
/// asymptotic continuation for very negative z0.
double log_window_integral(double z0);
double window_integral(double z0);

/// Whole-interval variant of the long-horizon sup display: the same formula
/// with T_u in place of T_u - t_u. Reference quantity for the
/// stationarity-comparison factor (gamma - t*)^+/gamma.
AsymptoticEstimate full_interval_sup_reference(const QueueSpec& spec, const HorizonFamily& family,
                                               double u, const ConstantsProvider& provider = {});

struct StationaryReport {
    std::string point_relation; // "factor" | "transient-dominates" | "equivalent" | "boundary"
    double point_factor;
    std::string sup_relation; // as above, or "n/a-short"
    double sup_factor;
    bool degenerate_prefactor;

    nlohmann::json to_json() const;
};

/// Comparison factors against the stationary tail quantities.
StationaryReport stationary_ratio(const QueueSpec& spec, const HorizonFamily& family);

/// Routes per classification to exactly one evaluator.
AsymptoticEstimate approx_dispatch(const QueueSpec& spec, const HorizonFamily& family, double u,
                                   Target target, const ConstantsProvider& provider = {});

} // namespace gfq
