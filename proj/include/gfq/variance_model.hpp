#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace gfq {

/// sigma^2(t) = scale * t^(2*hurst), hurst in (0,1).
struct FractionalBrownian {
    double hurst;
    double scale;
};

/// Tabulated variance function with declared power-law behaviour at the
/// origin (A0, alpha0) and at infinity (Ainf, alphainf). Between knots the
/// table is interpolated linearly in log-log coordinates; outside the knot
/// range the declared exponents extrapolate, anchored at the boundary knot.
///
/// Ultimate monotonicity of the derivatives (needed by the asymptotic
/// theory) cannot be verified from finitely many knots and is the caller's
/// contract.
struct NumericTable {
    std::vector<std::pair<double, double>> knots; // (t, sigma^2(t)), t ascending
    double a0;
    double alpha0; // in (0, 1]
    double ainf;
    double alphainf; // in (0, 1)
    double tolerance; // allowed relative mismatch of boundary knots vs power laws
};

/// Variance function of a stationary-increment Gaussian input.
/// Immutable after construction; all member functions are pure.
class VarianceModel {
  public:
    static VarianceModel fbm(double hurst, double scale = 1.0);
    static VarianceModel table(std::vector<std::pair<double, double>> knots,
                               double a0, double alpha0, double ainf, double alphainf,
                               double tolerance = 0.05);

    double sigma2(double t) const;
    double sigma(double t) const;

    /// Inverse of sigma: returns t with sigma(t) = v (relative error <= 1e-12).
    double sigma_inverse(double v) const;

    /// Cov(X(s), X(t)) = (sigma^2(s) + sigma^2(t) - sigma^2(|t-s|)) / 2.
    double increment_covariance(double s, double t) const;

    double alpha0() const;
    double a0() const;
    double alpha_inf() const;
    double a_inf() const;

    bool is_fbm() const { return std::holds_alternative<FractionalBrownian>(kind_); }
    const FractionalBrownian& as_fbm() const { return std::get<FractionalBrownian>(kind_); }
    const NumericTable& as_table() const { return std::get<NumericTable>(kind_); }

    /// Stable identifier used in cache keys and JSON output.
    std::string fingerprint() const;

    nlohmann::json to_json() const;
    static VarianceModel from_json(const nlohmann::json& j);

  private:
    explicit VarianceModel(std::variant<FractionalBrownian, NumericTable> kind)
        : kind_(std::move(kind)) {}

    std::variant<FractionalBrownian, NumericTable> kind_;
};

} // namespace gfq
