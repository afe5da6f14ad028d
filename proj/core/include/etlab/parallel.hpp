#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace etlab {

inline unsigned resolve_workers(unsigned requested) noexcept {
    if (requested != 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/// Splits [0, count) into contiguous chunks and runs body(begin, end) on up
/// to `workers` threads. Callers write results by index, so the outcome does
/// not depend on the worker count. The first exception is rethrown.
template <class Body>
void parallel_chunks(std::size_t count, unsigned workers, Body&& body) {
    workers = resolve_workers(workers);
    if (count == 0) return;
    const std::size_t n_threads = std::min<std::size_t>(workers, count);
    if (n_threads <= 1) {
        body(std::size_t{0}, count);
        return;
    }
    std::vector<std::exception_ptr> errors(n_threads);
    std::vector<std::thread> threads;
    threads.reserve(n_threads);
    const std::size_t chunk = (count + n_threads - 1) / n_threads;
    for (std::size_t w = 0; w < n_threads; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(count, begin + chunk);
        if (begin >= end) break;
        threads.emplace_back([&, w, begin, end] {
            try {
                body(begin, end);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace etlab
