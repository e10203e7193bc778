#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace klf {

namespace detail {
inline std::atomic<unsigned>& worker_setting()
{
    static std::atomic<unsigned> w{0};
    return w;
}
} // namespace detail

/** @brief Number of worker threads used by parallel loops (0 selects the hardware count). */
inline void set_workers(unsigned n) { detail::worker_setting().store(n); }

inline unsigned workers()
{
    unsigned w = detail::worker_setting().load();
    if (w == 0) w = std::max(1u, std::thread::hardware_concurrency());
    return w;
}

/**
 * @brief Runs f(i) for i in [0, n) on the configured workers.
 *
 * Indices are dealt round-robin. Callers write results by index and reduce
 * afterwards, so the outcome never depends on the worker count.
 */
template <class F>
void parallel_for(std::size_t n, F&& f)
{
    const std::size_t w = std::min<std::size_t>(workers(), n);
    if (w <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::exception_ptr err;
    std::mutex mu;
    std::vector<std::thread> pool;
    pool.reserve(w);
    for (std::size_t t = 0; t < w; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (std::size_t i = t; i < n; i += w) f(i);
            } catch (...) {
                std::lock_guard<std::mutex> lk(mu);
                if (!err) err = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

} // namespace klf
