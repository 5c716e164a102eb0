#include "gfq/threading.hpp"

#include <atomic>
#include <cstdlib>
#include <mutex>
#include <thread>
#include <vector>

namespace gfq {

namespace {
std::atomic<int> g_max_threads{0};

int resolve_threads() {
    int n = g_max_threads.load();
    if (n > 0) return n;
    if (const char* env = std::getenv("GFQ_THREADS")) {
        const int parsed = std::atoi(env);
        if (parsed > 0) return parsed;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}
} // namespace

void set_max_threads(int n) { g_max_threads.store(n); }

int max_threads() { return resolve_threads(); }

void parallel_blocks(std::size_t n_blocks, const std::function<void(std::size_t)>& fn) {
    if (n_blocks == 0) return;
    const std::size_t workers =
        std::min<std::size_t>(static_cast<std::size_t>(resolve_threads()), n_blocks);
    if (workers <= 1) {
        for (std::size_t b = 0; b < n_blocks; ++b) fn(b);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::exception_ptr first_error;
    std::atomic<bool> failed{false};
    std::mutex cap_mutex;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t b = next.fetch_add(1);
                if (b >= n_blocks || failed.load()) break;
                try {
                    fn(b);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(cap_mutex);
                    if (!failed.exchange(true)) first_error = std::current_exception();
                    break;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace gfq
