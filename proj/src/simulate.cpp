#include "gfq/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gfq/errors.hpp"
#include "gfq/fft.hpp"
#include "gfq/normal.hpp"

namespace gfq {

FgnSampler::FgnSampler(const std::function<double(double)>& sigma2, std::size_t n, double step,
                       std::string label) {
    if (n < 1) throw validation_error("FgnSampler: need n >= 1");
    if (!(step > 0.0)) throw validation_error("FgnSampler: step must be positive");
    n_ = n;
    step_ = step;
    const std::size_t m = ceil_pow2(n);
    embed_ = 2 * m;

    // increment autocovariance gamma(k) from the variogram
    std::vector<double> gamma(m + 1);
    auto s2 = [&](std::size_t k) { return sigma2(static_cast<double>(k) * step); };
    for (std::size_t k = 0; k <= m; ++k) {
        gamma[k] = 0.5 * (s2(k + 1) - 2.0 * s2(k) + (k == 0 ? 0.0 : s2(k - 1)));
    }
    if (!(gamma[0] > 0.0)) throw numeric_error("FgnSampler: increment variance must be positive");

    white_ = true;
    for (std::size_t k = 1; k <= m && white_; ++k) {
        if (std::abs(gamma[k]) > 1e-15 * gamma[0]) white_ = false;
    }
    if (white_) {
        white_sd_ = std::sqrt(gamma[0]);
        return;
    }

    std::vector<std::complex<double>> circ(embed_);
    for (std::size_t k = 0; k <= m; ++k) circ[k] = gamma[k];
    for (std::size_t k = 1; k < m; ++k) circ[embed_ - k] = gamma[k];
    fft_pow2(circ, false);

    double max_eig = 0.0;
    for (const auto& z : circ) max_eig = std::max(max_eig, z.real());
    const double tol = 1e-9 * std::max(1.0, max_eig);
    sqrt_eig_.resize(embed_);
    for (std::size_t k = 0; k < embed_; ++k) {
        double lam = circ[k].real();
        if (lam < -tol) {
            std::ostringstream os;
            os << "FgnSampler: circulant embedding has negative eigenvalue " << lam
               << " (n=" << n << (label.empty() ? "" : ", " + label) << ")";
            throw numeric_error(os.str());
        }
        sqrt_eig_[k] = std::sqrt(std::max(lam, 0.0));
    }
}

void FgnSampler::sample(Rng& rng, Workspace& ws, std::vector<double>& out) const {
    out.resize(n_);
    if (white_) {
        for (std::size_t j = 0; j < n_; ++j) out[j] = white_sd_ * rng.normal();
        return;
    }
    const std::size_t m = embed_ / 2;
    auto& y = ws.spectral;
    y.resize(embed_);
    y[0] = sqrt_eig_[0] * rng.normal();
    y[m] = sqrt_eig_[m] * rng.normal();
    constexpr double inv_sqrt2 = 0.7071067811865476;
    for (std::size_t k = 1; k < m; ++k) {
        const double re = rng.normal() * inv_sqrt2;
        const double im = rng.normal() * inv_sqrt2;
        y[k] = sqrt_eig_[k] * std::complex<double>(re, im);
        y[embed_ - k] = std::conj(y[k]);
    }
    fft_pow2(y, false);
    const double norm = 1.0 / std::sqrt(static_cast<double>(embed_));
    for (std::size_t j = 0; j < n_; ++j) out[j] = y[j].real() * norm;
}

SamplePath generate_fgn(double hurst, std::size_t n, double step, std::uint64_t seed) {
    const auto model = VarianceModel::fbm(hurst);
    FgnSampler sampler([&](double t) { return model.sigma2(t); }, n, step,
                       "hurst=" + std::to_string(hurst));
    Rng rng = Rng::substream(seed, 0, 0);
    FgnSampler::Workspace ws;
    std::vector<double> inc;
    sampler.sample(rng, ws, inc);
    SamplePath path;
    path.step = step;
    path.values.resize(n + 1);
    path.values[0] = 0.0;
    for (std::size_t j = 0; j < n; ++j) path.values[j + 1] = path.values[j] + inc[j];
    return path;
}

WorkloadPath workload_path(const SamplePath& path, double c, double x) {
    if (path.values.empty() || path.values[0] != 0.0) {
        throw validation_error("workload_path: path must start at X(0) = 0");
    }
    WorkloadPath wp;
    wp.step = path.step;
    wp.q_values.resize(path.values.size());
    const double ch = c * path.step;
    double w = 0.0;
    double q = x;
    wp.q_values[0] = q;
    double sup = q;
    for (std::size_t k = 1; k < path.values.size(); ++k) {
        w = std::max(0.0, w + (path.values[k] - path.values[k - 1]) - ch);
        q = std::max(x + path.values[k] - c * path.step * static_cast<double>(k), w);
        wp.q_values[k] = q;
        sup = std::max(sup, q);
    }
    wp.running_sup = sup;
    return wp;
}

double exact_bm_crossing_log(double u, double c, double T) {
    if (!(T > 0.0)) throw validation_error("exact_bm_crossing: T must be positive");
    if (u < 0.0) throw validation_error("exact_bm_crossing: u must be nonnegative");
    const double rt = std::sqrt(T);
    const double a = gauss_tail_log((u + c * T) / rt);
    const double b = -2.0 * c * u + gauss_tail_log((u - c * T) / rt);
    return std::min(0.0, log_sum_exp(a, b));
}

double exact_bm_crossing(double u, double c, double T) {
    return std::exp(exact_bm_crossing_log(u, c, T));
}

double exact_bm_stationary_log(double u, double c) {
    if (u < 0.0) throw validation_error("exact_bm_stationary: u must be nonnegative");
    if (!(c > 0.0)) throw validation_error("exact_bm_stationary: c must be positive");
    return -2.0 * c * u;
}

double exact_bm_stationary(double u, double c) {
    return std::exp(exact_bm_stationary_log(u, c));
}

} // namespace gfq
