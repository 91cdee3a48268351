#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mnls::detail {

// Runs fn(i) for i in [0, count) across `workers` threads pulling from a
// shared index counter. Each worker trims its OpenMP team so the kernels
// underneath do not oversubscribe the machine. The first exception wins and
// is rethrown once the pool has drained.
inline void run_indexed(std::size_t count, int workers, const std::function<void(std::size_t)>& fn) {
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex mu;
#ifdef _OPENMP
    const int base = omp_get_max_threads();
#else
    const int base = std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
#endif
    const int nw = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(workers), count));
    const int per = std::max(1, base / nw);
    auto body = [&] {
#ifdef _OPENMP
        omp_set_num_threads(per);
#else
        (void)per;
#endif
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nw));
    for (int w = 0; w < nw; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

} // namespace mnls::detail
