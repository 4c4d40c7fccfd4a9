// Copyright romkit developers. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef ROMKIT_DETAIL_PARALLEL_HPP
#define ROMKIT_DETAIL_PARALLEL_HPP

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace romkit::detail {

/// Run fn(i) for i in [0, n) on up to `threads` workers. The first thrown
/// exception is rethrown on the caller after all workers drain.
template <typename Fn>
void parallel_for(int n, int threads, Fn&& fn) {
    if (n <= 0) return;
    threads = std::max(1, std::min(threads, n));
    if (threads == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace romkit::detail

#endif
