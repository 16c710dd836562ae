#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace nkg {

inline unsigned default_worker_count() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
}

// Runs fn(0), ..., fn(n-1) on a bounded crew of workers. Indices are claimed
// through a shared counter, so a caller that writes task i's result into slot
// i of a pre-sized vector gets output independent of scheduling. After the
// first exception the remaining indices are drained as no-ops and that
// exception is rethrown on the calling thread.
template <typename Fn>
void parallel_for_indexed(std::size_t n, unsigned workers, Fn&& fn) {
    if (n == 0) return;
    if (workers <= 1 || n == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::atomic<bool> bail{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= n) return;
            if (bail.load(std::memory_order_acquire)) continue;
            try {
                fn(i);
            } catch (...) {
                const std::scoped_lock lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                bail.store(true, std::memory_order_release);
            }
        }
    };

    std::vector<std::thread> crew;
    crew.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) crew.emplace_back(work);
    for (auto& t : crew) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace nkg
