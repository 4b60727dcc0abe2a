#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace gelshatter {

/// Runs fn(i) for i in [0, count) on up to `workers` threads. Tasks own their
/// state; the schedule never influences results because each index is
/// processed independently. The first exception is rethrown after all
/// threads join.
template <typename Fn>
void parallel_for_index(std::size_t count, unsigned workers, Fn&& fn) {
    if (count == 0) return;
    if (workers <= 1 || count == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    const unsigned n_threads = static_cast<unsigned>(
        std::min<std::size_t>(workers, count));
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

/// Worker-count default: the GELSHATTER_WORKERS environment variable when
/// set, otherwise the hardware concurrency.
unsigned default_workers();

}  // namespace gelshatter
