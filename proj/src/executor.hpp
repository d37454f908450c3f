#pragma once

#include <oneapi/tbb/global_control.h>
#include <oneapi/tbb/parallel_for.h>
#include <oneapi/tbb/task_arena.h>

#include <cstddef>
#include <memory>

namespace neuroevo::detail {

// Runs independent candidate evaluations. Each task writes only its own
// result slot, so serial and parallel execution give identical results.
class Executor {
public:
    explicit Executor(std::size_t threads) {
        if (threads > 1) {
            // lets the requested width apply even above the hardware concurrency
            limit_ = std::make_unique<oneapi::tbb::global_control>(
                oneapi::tbb::global_control::max_allowed_parallelism, threads);
            arena_ = std::make_unique<oneapi::tbb::task_arena>(static_cast<int>(threads));
        }
    }

    template <typename Fn>
    void for_each(std::size_t n, Fn&& fn) const {
        if (!arena_ || n < 2) {
            for (std::size_t i = 0; i < n; ++i) fn(i);
            return;
        }
        arena_->execute([&] { oneapi::tbb::parallel_for(std::size_t{0}, n, [&](std::size_t i) { fn(i); }); });
    }

private:
    std::unique_ptr<oneapi::tbb::global_control> limit_;
    std::unique_ptr<oneapi::tbb::task_arena> arena_;
};

}  // namespace neuroevo::detail
