#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace nnkg {

/// 0 (or negative) means "use all available hardware threads".
inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs fn(chunk_begin, chunk_end) over a static block partition of
/// [begin, end). Blocks are contiguous and disjoint, so workers may write
/// to index-addressed output without synchronization. The partition depends
/// only on the range, never on scheduling, so results are deterministic.
template <typename Fn>
void parallel_for_blocks(std::int64_t begin, std::int64_t end, int threads, Fn&& fn) {
    const std::int64_t n = end - begin;
    if (n <= 0) return;
    const int nt = static_cast<int>(std::min<std::int64_t>(resolve_threads(threads), n));
    if (nt <= 1) {
        fn(begin, end);
        return;
    }
    const std::int64_t step = (n + nt - 1) / nt;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nt));
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    for (int t = 0; t < nt; ++t) {
        const std::int64_t b = begin + t * step;
        const std::int64_t e = std::min(end, b + step);
        if (b >= e) break;
        pool.emplace_back([&, b, e] {
            try {
                fn(b, e);
            } catch (...) {
                if (!failed.exchange(true)) error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

/// Runs fn(i) for i in [0, count) with work pulled from a shared counter.
/// Output must be addressed by i so the result is scheduling-independent.
template <typename Fn>
void parallel_for_items(std::int64_t count, int threads, Fn&& fn) {
    if (count <= 0) return;
    const int nt = static_cast<int>(std::min<std::int64_t>(resolve_threads(threads), count));
    if (nt <= 1) {
        for (std::int64_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nt));
    for (int t = 0; t < nt; ++t) {
        pool.emplace_back([&] {
            try {
                for (;;) {
                    const std::int64_t i = next.fetch_add(1, std::memory_order_relaxed);
                    if (i >= count || failed.load(std::memory_order_relaxed)) break;
                    fn(i);
                }
            } catch (...) {
                if (!failed.exchange(true)) error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

} // namespace nnkg
