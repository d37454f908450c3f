#pragma once

#include "neuroevo/rng.hpp"

#include <cstddef>
#include <vector>

namespace neuroevo {

/// Training-set indices evaluated together in one limited evaluation.
struct Batch {
    std::vector<std::size_t> instance_indices;
};

/// Disjoint batches covering the training set for one epoch. All batches hold
/// `batch_size` instances except possibly the last, which holds the remainder.
struct BatchSchedule {
    std::vector<Batch> batches;
    std::size_t epoch = 0;
};

struct InheritanceParams {
    double decay = 0.2;

    void validate() const;
};

/// Random permutation of [0, train_size) cut into ceil(train_size / batch_size) chunks.
BatchSchedule partition_batches(std::size_t train_size, std::size_t batch_size, Rng& rng);

/// f' = f_parent * (1 - decay) + f
inline double inherit_asexual(double parent_fitness, double decay, double batch_fitness) {
    return parent_fitness * (1.0 - decay) + batch_fitness;
}

/// f' = (f_parent1 + f_parent2) / 2 * (1 - decay) + f
inline double inherit_sexual(double parent1_fitness, double parent2_fitness, double decay, double batch_fitness) {
    return ((parent1_fitness + parent2_fitness) / 2.0) * (1.0 - decay) + batch_fitness;
}

/// Fitness credited to a rand/1 mutant: the mean of its three donors.
inline double mutant_fitness(double f1, double f2, double f3) { return (f1 + f2 + f3) / 3.0; }

}  // namespace neuroevo
