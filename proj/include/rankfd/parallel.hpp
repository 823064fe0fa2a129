#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rankfd {

/// Resolves a thread-count request; 0 (or negative) means "auto".
inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

/// Runs body(i) for every i in [0, n) on up to `threads` threads.
/// Indices are partitioned into contiguous blocks. Callers must write
/// results into disjoint per-index slots; then the outcome is identical for
/// any thread count.
template <typename F>
void parallel_for(std::int64_t n, int threads, F&& body) {
    if (n <= 0) return;
    const int workers =
        static_cast<int>(std::min<std::int64_t>(resolve_threads(threads), n));
    if (workers <= 1) {
        for (std::int64_t i = 0; i < n; ++i) body(i);
        return;
    }

    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; ++t) {
        const std::int64_t begin = n * t / workers;
        const std::int64_t end = n * (t + 1) / workers;
        pool.emplace_back([&, begin, end]() {
            try {
                for (std::int64_t i = begin; i < end; ++i) body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace rankfd
