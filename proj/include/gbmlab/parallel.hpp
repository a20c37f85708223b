#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace gbmlab {

inline int hardware_threads() {
    const unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : static_cast<int>(n);
}

namespace detail {
inline std::atomic<int>& thread_count_slot() {
    static std::atomic<int> slot{hardware_threads()};
    return slot;
}
}  // namespace detail

inline int thread_count() { return detail::thread_count_slot().load(std::memory_order_relaxed); }

inline void set_thread_count(int n) {
    detail::thread_count_slot().store(n < 1 ? 1 : n, std::memory_order_relaxed);
}

// Runs body(begin, end, block_index) over fixed-size blocks of [0, n).
// Blocks are claimed from an atomic queue but the decomposition depends only
// on (n, block_size), so writes keyed by block_index are reproducible across
// thread counts.
template <typename Body>
void for_blocks(std::size_t n, std::size_t block_size, Body body) {
    if (n == 0) return;
    if (block_size == 0) block_size = 1;
    const std::size_t n_blocks = (n + block_size - 1) / block_size;
    const int want = thread_count();
    const std::size_t workers =
        n_blocks < static_cast<std::size_t>(want) ? n_blocks : static_cast<std::size_t>(want);

    if (workers <= 1) {
        for (std::size_t blk = 0; blk < n_blocks; ++blk) {
            const std::size_t begin = blk * block_size;
            const std::size_t end = begin + block_size < n ? begin + block_size : n;
            body(begin, end, blk);
        }
        return;
    }

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t blk = next.fetch_add(1, std::memory_order_relaxed);
                if (blk >= n_blocks || failed.load(std::memory_order_relaxed)) return;
                const std::size_t begin = blk * block_size;
                const std::size_t end = begin + block_size < n ? begin + block_size : n;
                try {
                    body(begin, end, blk);
                } catch (...) {
                    if (!failed.exchange(true)) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

// Deterministic map-reduce: per-block partials land in slots and are folded
// serially in block order, so the result is independent of scheduling.
template <typename T, typename BlockFn>
T reduce_blocks(std::size_t n, std::size_t block_size, T init, BlockFn block_fn) {
    if (n == 0) return init;
    if (block_size == 0) block_size = 1;
    const std::size_t n_blocks = (n + block_size - 1) / block_size;
    std::vector<T> partial(n_blocks, init);
    for_blocks(n, block_size,
               [&](std::size_t begin, std::size_t end, std::size_t blk) {
                   partial[blk] = block_fn(begin, end);
               });
    T acc = init;
    for (std::size_t blk = 0; blk < n_blocks; ++blk) acc = acc + partial[blk];
    return acc;
}

}  // namespace gbmlab
