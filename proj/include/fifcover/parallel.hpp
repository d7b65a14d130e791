#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace fifcover {

/// Number of worker threads; 0 means std::thread::hardware_concurrency().
struct Parallelism {
    unsigned workers = 1;

    unsigned resolved() const noexcept {
        if (workers != 0) return workers;
        return std::max(1u, std::thread::hardware_concurrency());
    }
};

/// Splits [0, count) into contiguous chunks, one per worker, and calls
/// body(begin, end) for each. Chunks write disjoint output ranges, so the
/// result never depends on the worker count.
template <typename Body>
void parallel_for(std::size_t count, Parallelism par, Body&& body) {
    const std::size_t workers = std::min<std::size_t>(par.resolved(), std::max<std::size_t>(count, 1));
    if (workers <= 1 || count < 1024) {
        body(std::size_t{0}, count);
        return;
    }
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(workers);
    threads.reserve(workers);
    const std::size_t chunk = (count + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = std::min(count, w * chunk);
        const std::size_t end = std::min(count, begin + chunk);
        threads.emplace_back([&, w, begin, end] {
            try {
                body(begin, end);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

} // namespace fifcover
