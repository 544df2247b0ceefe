#ifndef LAGCZ_DETAIL_PARALLEL_HPP
#define LAGCZ_DETAIL_PARALLEL_HPP

#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace lagcz::detail {

// Runs f(i) for i in [0, n) on up to `threads` workers (0 = hardware
// concurrency). Callers write results into pre-sized slots indexed by i, so
// reductions stay deterministic regardless of the worker count.
template <class F>
void parallel_for(std::size_t n, int threads, F&& f) {
    if (n == 0) return;
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    const unsigned want = threads > 0 ? static_cast<unsigned>(threads) : hw;
    const unsigned n_workers = static_cast<unsigned>(std::min<std::size_t>(want, n));
    if (n_workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (unsigned w = 0; w < n_workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n || failed.load()) return;
                try {
                    f(i);
                } catch (...) {
                    if (!failed.exchange(true)) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failed.load() && error) std::rethrow_exception(error);
}

}  // namespace lagcz::detail

#endif
