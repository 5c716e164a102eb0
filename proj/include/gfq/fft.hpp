#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace gfq {

/// In-place iterative radix-2 FFT. Size must be a power of two.
/// inverse=true applies the conjugate transform without the 1/n factor.
void fft_pow2(std::vector<std::complex<double>>& a, bool inverse);

/// Smallest power of two >= n (n >= 1).
std::size_t ceil_pow2(std::size_t n);

} // namespace gfq
