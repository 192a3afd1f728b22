#ifndef ELLSPEC_PARALLEL_HPP
#define ELLSPEC_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ellspec
{

/// Runs f(i) for i in [0, n) on up to `threads` workers (static interleaved split).
/**
 * f must write only to slots owned by i. The first exception thrown by any
 * worker is rethrown after all workers have joined.
 */
template <class F>
void parallel_for(std::size_t n, unsigned threads, F &&f)
{
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (threads == 1) {
        for (std::size_t i = 0; i < n; ++i) {
            f(i);
        }
        return;
    }
    std::exception_ptr failure;
    std::mutex mtx;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t]() {
            try {
                for (std::size_t i = t; i < n; i += threads) {
                    f(i);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(mtx);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        });
    }
    for (auto &th : pool) {
        th.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

}

#endif
