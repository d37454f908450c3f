#pragma once

#include "neuroevo/engine.hpp"
#include "neuroevo/report.hpp"
#include "neuroevo/rng.hpp"

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace neuroevo {

/// NP equally sized members stored contiguously, with aligned fitness values.
class Population {
public:
    Population() = default;
    Population(std::size_t size, std::size_t dim) : dim_(dim), genes_(size * dim, 0.0), fitness_(size, 0.0) {}

    std::size_t size() const { return fitness_.size(); }
    std::size_t dim() const { return dim_; }

    std::span<double> member(std::size_t i) { return {genes_.data() + i * dim_, dim_}; }
    std::span<const double> member(std::size_t i) const { return {genes_.data() + i * dim_, dim_}; }

    std::vector<double>& fitness() { return fitness_; }
    const std::vector<double>& fitness() const { return fitness_; }

    /// Index of the highest fitness, lowest index on ties.
    std::size_t best_index() const;

    bool operator==(const Population&) const = default;

private:
    std::size_t dim_ = 0;
    std::vector<double> genes_;
    std::vector<double> fitness_;
};

/// Members drawn uniformly from [init_low, init_high); fitness set to 0.
Population init_population(const DEParams& params, std::size_t dim, Rng& rng);

struct Mutant {
    std::vector<double> genes;
    std::array<std::size_t, 3> donors{};  // r1, r2, r3
};

/// x_r1 + F * (x_r2 - x_r3) with r1, r2, r3 mutually distinct and != target.
/// No bound repair is applied.
Mutant mutate_rand1(const Population& pop, std::size_t target_index, double F, Rng& rng);

/// Binomial crossover. Draws j_rand first, then one uniform per gene in
/// order; a gene comes from the mutant when its draw is < CR or it is j_rand.
std::vector<double> crossover_binomial(std::span<const double> target, std::span<const double> mutant, double CR,
                                       Rng& rng);

/// Trial survives only on strict improvement.
inline bool select(double target_fitness, double trial_fitness) { return trial_fitness > target_fitness; }

/// Standard DE: full genotypes, fitness is full training-set accuracy.
RunReport evolve_de(const NetworkLayout& layout, const DataSplits& splits, const EngineOptions& options, Rng& rng);

/// Limited-evaluation DE: full genotypes evaluated per batch with fitness inheritance.
RunReport evolve_lede(const NetworkLayout& layout, const DataSplits& splits, const EngineOptions& options, Rng& rng);

}  // namespace neuroevo
