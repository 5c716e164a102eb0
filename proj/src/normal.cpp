#include "gfq/normal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace gfq {

namespace {
constexpr double k_sqrt1_2 = std::numbers::sqrt2 / 2.0;
constexpr double k_log_sqrt_2pi = 0.9189385332046727417803297364056176;
} // namespace

double gauss_cdf(double z) { return 0.5 * std::erfc(-z * k_sqrt1_2); }

double gauss_tail(double z) { return 0.5 * std::erfc(z * k_sqrt1_2); }

double gauss_pdf(double z) {
    return std::exp(-0.5 * z * z - k_log_sqrt_2pi);
}

double gauss_tail_log(double z) {
    if (z <= 8.0) {
        // erfc keeps full relative accuracy here; no underflow until z ~ 37.
        return std::log(0.5 * std::erfc(z * k_sqrt1_2));
    }
    // Mills ratio continued fraction: Psi(z) = phi(z) / (z + 1/(z + 2/(z + ...)))
    double cf = 0.0;
    for (int k = 60; k >= 1; --k) cf = static_cast<double>(k) / (z + cf);
    const double mills = 1.0 / (z + cf);
    return -0.5 * z * z - k_log_sqrt_2pi + std::log(mills);
}

double gauss_cdf_log(double z) { return gauss_tail_log(-z); }

double log_sum_exp(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    const double m = std::max(a, b);
    return m + std::log1p(std::exp(std::min(a, b) - m));
}

} // namespace gfq
