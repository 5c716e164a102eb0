#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "gfq/rng.hpp"
#include "gfq/variance_model.hpp"

namespace gfq {

/// Grid path of the input process; values[0] = 0.
struct SamplePath {
    double step;
    std::vector<double> values;
};

/// Grid workload path; q_values[0] = x.
struct WorkloadPath {
    double step;
    std::vector<double> q_values;
    double running_sup;
};

/// Stationary-increment Gaussian noise sampler by circulant embedding
/// (Davies-Harte). The covariance sequence and the embedding spectrum are
/// precomputed once; sample() is then one spectral synthesis per call.
/// Exact in distribution when the circulant eigenvalues are nonnegative;
/// a spectrum below -1e-9 (relative) raises numeric_error.
///
/// When the increment covariance is exactly diagonal (Brownian case) the
/// FFT synthesis degenerates to iid draws and is carried out directly.
class FgnSampler {
  public:
    /// sigma2: variance function of the process whose increments are sampled.
    FgnSampler(const std::function<double(double)>& sigma2, std::size_t n, double step,
               std::string label = {});

    std::size_t n() const { return n_; }
    double step() const { return step_; }

    struct Workspace {
        std::vector<std::complex<double>> spectral;
    };

    /// Fills out[0..n) with the stationary increments.
    void sample(Rng& rng, Workspace& ws, std::vector<double>& out) const;

  private:
    std::size_t n_;
    double step_;
    std::size_t embed_; // 2m, power of two
    bool white_ = false;
    double white_sd_ = 0.0;
    std::vector<double> sqrt_eig_;
};

/// Cumulative fBm path on an equispaced grid: n increments of fractional
/// Gaussian noise (Var X(t) = t^(2H)), deterministic per seed.
SamplePath generate_fgn(double hurst, std::size_t n, double step, std::uint64_t seed);

/// Workload path per the reflected recursion
///   W_0 = 0, W_k = max(0, W_{k-1} + dX_k - c h),
///   Q_k = max(x + X_k - c t_k, W_k),
/// an exact identity for the grid restriction of the double supremum.
WorkloadPath workload_path(const SamplePath& path, double c, double x);

/// P(sup_{[0,T]} (W(t) - c t) > u) for standard Brownian W (reflection
/// principle): Psi((u+cT)/sqrt(T)) + e^{-2cu} Psi((u-cT)/sqrt(T)).
double exact_bm_crossing(double u, double c, double T);
double exact_bm_crossing_log(double u, double c, double T);

/// Stationary tail e^{-2cu} of the reflected Brownian queue.
double exact_bm_stationary(double u, double c);
double exact_bm_stationary_log(double u, double c);

} // namespace gfq
