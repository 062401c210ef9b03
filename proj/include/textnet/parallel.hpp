#pragma once

#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace textnet {

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(i) for i in [0, n). Each index is handled exactly once; workers own
// disjoint index sets, so writing results by index needs no synchronization.
// The first exception thrown by any worker is rethrown on the calling thread.
inline void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
    threads = resolve_threads(threads);
    if (n <= 0) return;
    if (threads <= 1 || n == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    if (threads > n) threads = n;
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t]() {
            try {
                for (int i = t; i < n; i += threads) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace textnet
