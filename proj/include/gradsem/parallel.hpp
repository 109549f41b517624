#ifndef GRADSEM_PARALLEL_HPP
#define GRADSEM_PARALLEL_HPP

#include <atomic>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace gradsem {

// Runs fn(i) for i in [0, n) on up to `width` threads. Work is handed
// out through a shared counter; the first exception wins and is
// rethrown after all workers finish.
inline void parallel_for_indexed(std::size_t n, int width,
                                 const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    const auto threads = static_cast<std::size_t>(width < 1 ? 1 : width);
    if (threads == 1 || n == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(std::min(threads, n));
    for (std::size_t t = 0; t < std::min(threads, n); ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace gradsem

#endif  // GRADSEM_PARALLEL_HPP
