#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace fradi {

/// Runs fn(k) for k = 0..n-1, split over `threads` workers when threads > 1.
/// Each index is handled exactly once; callers must make iterations
/// write to disjoint data.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
    if (threads <= 1 || n < 2) {
        for (std::size_t k = 0; k < n; ++k) fn(k);
        return;
    }
    const std::size_t nw = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
    std::vector<std::thread> pool;
    pool.reserve(nw);
    for (std::size_t w = 0; w < nw; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t k = w; k < n; k += nw) fn(k);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace fradi
