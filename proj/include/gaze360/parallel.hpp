#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "gaze360/error.hpp"

namespace gaze360 {

// Parallelism degree: an explicit request wins, then GAZE360_JOBS, then 1.
inline int resolve_jobs(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("GAZE360_JOBS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 1 || v > 4096)
            fail(ErrorCode::BadConfig, "GAZE360_JOBS must be a positive integer");
        return static_cast<int>(v);
    }
    return 1;
}

// Runs fn(i) for every i in [0, count). Workers claim indices from a shared
// counter; each call writes only to its own preallocated slot, so output is
// independent of the worker count and of scheduling order.
template <typename Fn>
void parallel_for(long count, int jobs, Fn&& fn) {
    if (count <= 0) return;
    const long workers = std::min<long>(std::max(jobs, 1), count);
    if (workers == 1) {
        for (long i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<long> next{0};
    std::atomic<bool> abort{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto run = [&] {
        for (;;) {
            const long i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= count || abort.load(std::memory_order_relaxed)) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                abort.store(true, std::memory_order_relaxed);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (long t = 0; t < workers; ++t) pool.emplace_back(run);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace gaze360
