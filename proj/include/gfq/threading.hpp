#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace gfq {

/// Global worker-thread cap for Monte Carlo loops. 0 = auto
/// (GFQ_THREADS environment variable, else hardware concurrency).
void set_max_threads(int n);
int max_threads();

/// Runs fn(block_index) for block_index in [0, n_blocks) on up to
/// max_threads() workers. Blocks are claimed from a shared counter; each
/// block writes only to its own slot, so results are independent of the
/// thread count and of the claim order.
void parallel_blocks(std::size_t n_blocks, const std::function<void(std::size_t)>& fn);

/// Fixed block length for replicate batching. Estimates are reduced
/// block-by-block in index order, which keeps floating-point totals
/// bit-identical for every thread count.
inline constexpr std::size_t k_block_len = 1024;

} // namespace gfq
