#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <type_traits>
#include <vector>

namespace uqbench {

/// Runs task(r) for r = 0..count-1 on up to `workers` threads and returns the
/// results indexed by r. Tasks must derive all randomness from r, which makes
/// the output independent of the worker count and the schedule. If tasks
/// throw, the exception of the lowest failing index is rethrown.
template <class Task>
auto run_replicates(std::size_t count, std::size_t workers, Task&& task)
    -> std::vector<std::invoke_result_t<Task&, std::size_t>>
{
    using Result = std::invoke_result_t<Task&, std::size_t>;
    std::vector<Result> results(count);
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};

    auto drain = [&] {
        for (std::size_t r = next++; r < count; r = next++) {
            try {
                results[r] = task(r);
            } catch (...) {
                errors[r] = std::current_exception();
            }
        }
    };

    workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(count, 1));
    if (workers == 1) {
        drain();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers - 1);
        for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(drain);
        drain();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return results;
}

} // namespace uqbench
