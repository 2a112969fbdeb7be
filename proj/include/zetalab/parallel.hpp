#pragma once

// Deterministic work sharing: the caller fixes the chunk decomposition up
// front (never a function of the thread count) and workers pull chunk indices
// from an atomic counter.  Results land in per-chunk slots, so the merged
// output is identical for any thread count.

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace zetalab {

inline void parallel_chunks(int n_chunks, int threads,
                            const std::function<void(int)>& fn) {
    if (n_chunks <= 0) return;
    if (threads <= 1 || n_chunks == 1) {
        for (int i = 0; i < n_chunks; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex err_mutex;
    auto worker = [&] {
        for (;;) {
            int i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= n_chunks) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    int n_workers = std::min(threads, n_chunks);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(n_workers));
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace zetalab
