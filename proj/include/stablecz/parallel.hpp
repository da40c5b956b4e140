#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace stablecz {

inline int default_threads() {
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

/// Static block partition of [0,n). Results must be written to
/// caller-owned per-index storage so that reductions stay deterministic
/// regardless of the thread count.
template <class F>
void parallel_for(std::size_t n, F&& body, int threads = 0) {
    if (threads <= 0) threads = default_threads();
    if (threads == 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    const std::size_t nt = std::min<std::size_t>(threads, n);
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (std::size_t t = 0; t < nt; ++t) {
        pool.emplace_back([&, t]() {
            const std::size_t lo = n * t / nt, hi = n * (t + 1) / nt;
            for (std::size_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace stablecz
