#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace gibbsnet {

/// Calls `body(begin, end)` on `threads` contiguous chunks of [0, count).
///
/// Chunk boundaries depend on the thread count, so callers must write results
/// into per-index slots (or per-chunk partials merged in chunk order) to stay
/// deterministic. The first exception thrown by any chunk is rethrown.
template <class Body>
void parallel_chunks(std::size_t count, unsigned threads, Body&& body) {
    const std::size_t workers = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(count, 1));
    if (workers <= 1) {
        body(std::size_t{0}, count);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = count * w / workers;
        const std::size_t end = count * (w + 1) / workers;
        pool.emplace_back([&, w, begin, end] {
            try {
                body(begin, end);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

/// Number of chunks parallel_chunks will use.
inline std::size_t chunk_count(std::size_t count, unsigned threads) {
    return std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(count, 1));
}

}  // namespace gibbsnet
