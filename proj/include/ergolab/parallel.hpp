#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace ergolab {

// Runs fn(i) for i in [0, count) on up to `degree` worker threads
// (degree 0 = hardware concurrency).  Work items must be independent and
// write into pre-sized slots indexed by i; with that discipline the outcome
// is identical for any thread count.  The first exception thrown by a worker
// is rethrown on the calling thread.
template <typename Fn>
void parallel_for(std::size_t count, unsigned degree, Fn&& fn) {
    if (degree == 0) {
        degree = std::thread::hardware_concurrency();
        if (degree == 0) degree = 1;
    }
    if (degree > count) degree = unsigned(count);
    if (degree <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(degree);
    std::vector<std::thread> pool;
    pool.reserve(degree);
    for (unsigned t = 0; t < degree; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (;;) {
                    std::size_t i = next.fetch_add(1);
                    if (i >= count) break;
                    fn(i);
                }
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace ergolab
