#pragma once

namespace gfq {

/// Standard normal CDF Phi(z).
double gauss_cdf(double z);

/// Standard normal tail Psi(z) = 1 - Phi(z). Underflows to 0 for z >~ 38.
double gauss_tail(double z);

/// ln Psi(z), finite and accurate for |z| up to at least 1e4.
/// Uses erfc directly up to z = 8 and a Mills-ratio continued fraction beyond.
double gauss_tail_log(double z);

/// ln Phi(z) = gauss_tail_log(-z).
double gauss_cdf_log(double z);

/// Standard normal density.
double gauss_pdf(double z);

/// ln(e^a + e^b), tolerating -inf inputs.
double log_sum_exp(double a, double b);

} // namespace gfq
