#pragma once

#include <cstdint>
#include <vector>

#include "gfq/geometry.hpp"

namespace gfq {

/// Default cap on path-points (replications * grid_points) per call.
inline constexpr double k_default_mc_budget = 6e10;

struct MCEstimate {
    double p_hat;
    double std_error;
    double ci_low;
    double ci_high;
    std::uint64_t replications;
    std::uint64_t grid_points;
    std::uint64_t seed;
};

/// P(Q(T) > u) by crude Monte Carlo over `n_reps` grid paths.
/// Deterministic per seed and independent of the thread count.
MCEstimate estimate_pi(const QueueSpec& spec, double T, double u, std::uint64_t n_reps,
                       std::uint64_t grid_points, std::uint64_t seed,
                       double budget = k_default_mc_budget);

/// P(sup_{[0,T]} Q(t) > u), same ensemble contract.
MCEstimate estimate_pi_sup(const QueueSpec& spec, double T, double u, std::uint64_t n_reps,
                           std::uint64_t grid_points, std::uint64_t seed,
                           double budget = k_default_mc_budget);

struct PairRow {
    double u;
    MCEstimate point;
    MCEstimate sup;
};

/// All levels evaluated on one common path ensemble, so the estimates are
/// pathwise nested: p_hat is nonincreasing in u within a run.
std::vector<PairRow> estimate_pair(const QueueSpec& spec, double T, const std::vector<double>& u_list,
                                   std::uint64_t n_reps, std::uint64_t grid_points,
                                   std::uint64_t seed, double budget = k_default_mc_budget);

} // namespace gfq
