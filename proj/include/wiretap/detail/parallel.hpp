#pragma once

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace wiretap::detail {

template <class Body>
void for_each_trial(std::int64_t trials, unsigned threads, Body&& body)
{
    const unsigned workers = resolve_threads(threads, trials);
    if (workers <= 1) {
        for (std::int64_t t = 0; t < trials; ++t)
            body(t);
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                try {
                    for (std::int64_t t = next++; t < trials; t = next++)
                        body(t);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                    next = trials;
                }
            });
        }
    }
    if (failure)
        std::rethrow_exception(failure);
}

}  // namespace wiretap::detail
