#include "neuroevo/limited_evaluation.hpp"

#include "neuroevo/error.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace neuroevo {

void InheritanceParams::validate() const {
    if (!(decay >= 0.0 && decay <= 1.0)) {
        throw Error(ErrorCategory::InvalidArgument, "decay must lie in [0, 1], got " + std::to_string(decay));
    }
}

BatchSchedule partition_batches(std::size_t train_size, std::size_t batch_size, Rng& rng) {
    if (batch_size == 0 || batch_size > train_size) {
        throw Error(ErrorCategory::InvalidArgument, "batch size " + std::to_string(batch_size) +
                                                        " must lie in [1, " + std::to_string(train_size) + "]");
    }
    std::vector<std::size_t> order(train_size);
    std::iota(order.begin(), order.end(), std::size_t{0});
    // Fisher-Yates with the portable index draw
    for (std::size_t i = train_size; i > 1; --i) std::swap(order[i - 1], order[rng.index(i)]);

    BatchSchedule schedule;
    for (std::size_t start = 0; start < train_size; start += batch_size) {
        const std::size_t stop = std::min(train_size, start + batch_size);
        schedule.batches.push_back(Batch{{order.begin() + static_cast<std::ptrdiff_t>(start),
                                          order.begin() + static_cast<std::ptrdiff_t>(stop)}});
    }
    return schedule;
}

}  // namespace neuroevo
