#pragma once

#include <string>
#include <variant>

#include <nlohmann/json_fwd.hpp>

#include "gfq/geometry.hpp"

namespace gfq {

struct FixedT {
    double T;
};

/// T_u = kappa * u^rho
struct PowerLawT {
    double kappa;
    double rho;
};

/// T_u = t_u + delta * u^beta
struct OffsetFromPeak {
    double delta;
    double beta;
};

/// T_u = exp(C * u^(1 - 2 alpha_inf)); requires alpha_inf < 1/2.
/// With t3_scale set, the exponent is u^(2 (1 - alpha_inf)) instead, the
/// scale at which the horizon-growth condition for vanishing sup
/// probabilities has teeth; C is then compared against that condition's
/// admissible range.
struct ExpScaleT {
    double C;
    bool t3_scale = false;
};

/// Parametric horizon family u -> T_u. All regime limits are decidable in
/// closed form from the parameters.
class HorizonFamily {
  public:
    HorizonFamily(FixedT f) : kind_(f) {}
    HorizonFamily(PowerLawT p) : kind_(p) {}
    HorizonFamily(OffsetFromPeak o) : kind_(o) {}
    HorizonFamily(ExpScaleT e) : kind_(e) {}

    static HorizonFamily fixed(double T);
    static HorizonFamily power(double kappa, double rho);
    static HorizonFamily offset(double delta, double beta);
    static HorizonFamily exp_scale(double C, bool t3_scale = false);

    template <class V> auto visit(V&& v) const { return std::visit(std::forward<V>(v), kind_); }
    template <class T> const T* get_if() const { return std::get_if<T>(&kind_); }

    nlohmann::json to_json() const;
    static HorizonFamily from_json(const nlohmann::json& j);

  private:
    std::variant<FixedT, PowerLawT, OffsetFromPeak, ExpScaleT> kind_;
};

enum class Scenario {
    fixed_horizon,
    short_omega_zero,
    short_omega_finite,
    short_omega_infinite,
    moderate_finite_omega,
    long_infinite_omega,
};

std::string scenario_name(Scenario s);

/// Which x > 0 sub-case applies on a short horizon.
enum class ShortXBranch { na, phi_zero, phi_finite_alpha_high, phi_finite_alpha_half, phi_infinite };

/// Side of a threshold comparison on a moderate/long horizon;
/// `delegated` marks the alpha_inf >= 1/2 branch where the backlog drops out.
enum class ThresholdSide { na, below, equal, above, delegated };

/// Extended reals are carried as doubles: +-inf are genuine limits, NaN
/// means "not applicable for this scenario".
struct RegimeClassification {
    Scenario scenario;
    double gamma;     // lim T_u / u
    double phi;       // lim T_u / u^(1/(2 alpha_inf)), short horizons only
    double omega_inf; // lim Omega(u, T_u), short horizons only
    double omega;     // lim (T_u - t_u) / u^alpha_inf, moderate/long only
    double vartheta;  // lim (T_u - t_u) / sqrt(u), alpha_inf < 1/2 only
    ShortXBranch short_x_branch;
    ThresholdSide nth3_side;
    ThresholdSide nth4_side;
    double nth3_threshold;  // sqrt(2A/B (1-alpha) x)
    double nth4_threshold;  // (1 + c t*) x / (Ainf t*^(2 alpha))
    double nth4_log_limit;  // lim ln(T_u) / u^(1 - 2 alpha)
    bool t3_satisfied;

    nlohmann::json to_json() const;
};

/// Computes every limit of the taxonomy by closed-form exponent comparison
/// and dispatches to exactly one scenario. Boundary cases the theory
/// excludes (gamma = t*, omega = -inf) raise regime_error.
RegimeClassification classify(const QueueSpec& spec, const HorizonFamily& family);

/// Concrete T_u for this u (uses t_peak for OffsetFromPeak).
double horizon_value(const HorizonFamily& family, const QueueSpec& spec, double u);

} // namespace gfq
