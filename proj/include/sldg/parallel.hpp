#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace sldg {

namespace detail {
inline std::atomic<int>& thread_setting()
{
    static std::atomic<int> threads{1};
    return threads;
}
} // namespace detail

/// Upper bound on workers from SLDG_THREADS (defaults to hardware concurrency).
inline int thread_cap()
{
    int cap = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    if (const char* env = std::getenv("SLDG_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) cap = v;
    }
    return cap;
}

/// Worker count used by per-cell loops. 1 means sequential (the default).
inline void set_thread_count(int n) { detail::thread_setting() = std::clamp(n, 1, thread_cap()); }
inline int thread_count() { return detail::thread_setting(); }

/// Runs body(i) for i in [0, n). Each index is handled by exactly one worker,
/// so bodies that write only to slot i give results independent of the worker count.
template <class Body>
void parallel_for(int n, Body&& body)
{
    const int workers = std::min(thread_count(), n);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            const int begin = static_cast<int>(static_cast<long long>(n) * w / workers);
            const int end = static_cast<int>(static_cast<long long>(n) * (w + 1) / workers);
            try {
                for (int i = begin; i < end; ++i) body(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

} // namespace sldg
