#include "gfq/estimate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

#include "gfq/errors.hpp"
#include "gfq/simulate.hpp"
#include "gfq/threading.hpp"

namespace gfq {

namespace {

// regularized incomplete beta by continued fraction (Lentz)
double betacf(double a, double b, double x) {
    constexpr int max_iter = 300;
    constexpr double eps = 3e-14, fpmin = 1e-300;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0, d = 1.0 - qab * x / qap;
    if (std::abs(d) < fpmin) d = fpmin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::abs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::abs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < eps) break;
    }
    return h;
}

double beta_inc(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double beta_quantile(double p, double a, double b) {
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (beta_inc(a, b, mid) < p) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

MCEstimate make_estimate(std::uint64_t hits, std::uint64_t reps, std::uint64_t grid,
                         std::uint64_t seed) {
    const double n = static_cast<double>(reps);
    const double p = static_cast<double>(hits) / n;
    const double se = std::sqrt(p * (1.0 - p) / n);
    double lo, hi;
    const std::uint64_t misses = reps - hits;
    if (hits < 20 || misses < 20) {
        // exact Clopper-Pearson when the normal approximation is shaky
        lo = hits == 0 ? 0.0 : beta_quantile(0.025, static_cast<double>(hits), static_cast<double>(misses + 1));
        hi = hits == reps ? 1.0 : beta_quantile(0.975, static_cast<double>(hits + 1), static_cast<double>(misses));
    } else {
        lo = p - 1.959963984540054 * se;
        hi = p + 1.959963984540054 * se;
    }
    return MCEstimate{p, se, std::clamp(lo, 0.0, 1.0), std::clamp(hi, 0.0, 1.0), reps, grid, seed};
}

struct HitCounts {
    std::vector<std::uint64_t> point;
    std::vector<std::uint64_t> sup;
};

HitCounts run_mc(const QueueSpec& spec, double T, const std::vector<double>& u_list,
                 std::uint64_t n_reps, std::uint64_t grid_points, std::uint64_t seed,
                 double budget) {
    if (!(T > 0.0)) throw validation_error("estimate: T must be positive");
    if (grid_points < 2) throw validation_error("estimate: need at least 2 grid points");
    if (n_reps < 1) throw validation_error("estimate: need at least 1 replication");
    const double work = static_cast<double>(n_reps) * static_cast<double>(grid_points);
    if (work > budget) {
        throw budget_error("estimate: n_reps * grid_points exceeds the configured budget");
    }

    const double step = T / static_cast<double>(grid_points);
    FgnSampler sampler([&](double t) { return spec.model.sigma2(t); }, grid_points, step,
                       "model=" + spec.model.fingerprint());

    const std::size_t n_u = u_list.size();
    std::vector<std::atomic<std::uint64_t>> point_hits(n_u), sup_hits(n_u);
    for (auto& a : point_hits) a.store(0);
    for (auto& a : sup_hits) a.store(0);

    const std::uint64_t n_blocks = (n_reps + k_block_len - 1) / k_block_len;
    const double ch = spec.c * step;
    const double x = spec.x;

    parallel_blocks(n_blocks, [&](std::size_t b) {
        FgnSampler::Workspace ws;
        std::vector<double> inc;
        std::vector<std::uint64_t> local_point(n_u, 0), local_sup(n_u, 0);
        const std::uint64_t lo = static_cast<std::uint64_t>(b) * k_block_len;
        const std::uint64_t hi = std::min<std::uint64_t>(lo + k_block_len, n_reps);
        for (std::uint64_t rep = lo; rep < hi; ++rep) {
            Rng rng = Rng::substream(seed, rep, 0);
            sampler.sample(rng, ws, inc);
            double w = 0.0;     // reflected part
            double g = 0.0;     // X_k - c t_k
            double q_end = x;   // Q at the last grid point
            double q_sup = x;   // running sup of Q
            for (std::size_t k = 0; k < inc.size(); ++k) {
                const double d = inc[k] - ch;
                w = std::max(0.0, w + d);
                g += d;
                q_end = std::max(x + g, w);
                if (q_end > q_sup) q_sup = q_end;
            }
            for (std::size_t i = 0; i < n_u; ++i) {
                if (q_end > u_list[i]) ++local_point[i];
                if (q_sup > u_list[i]) ++local_sup[i];
            }
        }
        for (std::size_t i = 0; i < n_u; ++i) {
            point_hits[i].fetch_add(local_point[i]);
            sup_hits[i].fetch_add(local_sup[i]);
        }
    });

    HitCounts out;
    out.point.resize(n_u);
    out.sup.resize(n_u);
    for (std::size_t i = 0; i < n_u; ++i) {
        out.point[i] = point_hits[i].load();
        out.sup[i] = sup_hits[i].load();
    }
    return out;
}

MCEstimate degenerate_t0(const QueueSpec& spec, double u, std::uint64_t n_reps,
                         std::uint64_t grid_points, std::uint64_t seed) {
    const double p = spec.x > u ? 1.0 : 0.0;
    return MCEstimate{p, 0.0, p, p, n_reps, grid_points, seed};
}

} // namespace

MCEstimate estimate_pi(const QueueSpec& spec, double T, double u, std::uint64_t n_reps,
                       std::uint64_t grid_points, std::uint64_t seed, double budget) {
    if (u < 0.0) throw validation_error("estimate: u must be nonnegative");
    if (T == 0.0) return degenerate_t0(spec, u, n_reps, grid_points, seed);
    const auto hits = run_mc(spec, T, {u}, n_reps, grid_points, seed, budget);
    return make_estimate(hits.point[0], n_reps, grid_points, seed);
}

MCEstimate estimate_pi_sup(const QueueSpec& spec, double T, double u, std::uint64_t n_reps,
                           std::uint64_t grid_points, std::uint64_t seed, double budget) {
    if (u < 0.0) throw validation_error("estimate: u must be nonnegative");
    if (T == 0.0) return degenerate_t0(spec, u, n_reps, grid_points, seed);
    const auto hits = run_mc(spec, T, {u}, n_reps, grid_points, seed, budget);
    return make_estimate(hits.sup[0], n_reps, grid_points, seed);
}

std::vector<PairRow> estimate_pair(const QueueSpec& spec, double T, const std::vector<double>& u_list,
                                   std::uint64_t n_reps, std::uint64_t grid_points,
                                   std::uint64_t seed, double budget) {
    if (u_list.empty()) throw validation_error("estimate_pair: u_list must be nonempty");
    for (std::size_t i = 0; i < u_list.size(); ++i) {
        if (u_list[i] < 0.0) throw validation_error("estimate_pair: u must be nonnegative");
        if (i > 0 && u_list[i] < u_list[i - 1]) {
            throw validation_error("estimate_pair: u_list must be ascending");
        }
    }
    const auto hits = run_mc(spec, T, u_list, n_reps, grid_points, seed, budget);
    std::vector<PairRow> rows;
    rows.reserve(u_list.size());
    for (std::size_t i = 0; i < u_list.size(); ++i) {
        rows.push_back(PairRow{u_list[i], make_estimate(hits.point[i], n_reps, grid_points, seed),
                               make_estimate(hits.sup[i], n_reps, grid_points, seed)});
    }
    return rows;
}

} // namespace gfq
