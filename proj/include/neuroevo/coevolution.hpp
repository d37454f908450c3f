#pragma once

#include "neuroevo/de_ops.hpp"
#include "neuroevo/engine.hpp"
#include "neuroevo/ffnet.hpp"
#include "neuroevo/report.hpp"
#include "neuroevo/rng.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace neuroevo {

/// One genotype block per post-synaptic neuron, in genotype order.
struct Decomposition {
    struct Block {
        std::size_t offset = 0;
        std::size_t length = 0;
        bool operator==(const Block&) const = default;
    };
    std::vector<Block> blocks;

    std::size_t subpop_count() const { return blocks.size(); }
};

Decomposition decompose(const NetworkLayout& layout);

/// Copy of `global` with block `block_index` overwritten by `member`.
Genotype splice(std::span<const double> global, const Decomposition& decomp, std::size_t block_index,
                std::span<const double> member);

/// In-place variant of splice().
void splice_into(std::span<double> global, const Decomposition& decomp, std::size_t block_index,
                 std::span<const double> member);

/// One population per block; the global solution holds one member of each.
struct SubpopulationSet {
    std::vector<Population> subpops;
    Genotype global_solution;
};

SubpopulationSet init_subpopulations(const Decomposition& decomp, const DEParams& params, Rng& rng);

/// Per-member fitness, plus selection counters used during sampling.
struct FitnessTable {
    std::vector<std::vector<double>> values;
    std::vector<std::vector<std::size_t>> counts;
};

/// Estimates each member's fitness by evaluating trial * NP random
/// assemblies (one random member per subpopulation) on `first_batch`.
/// Each assembly's accuracy is credited to all its members; the sums are
/// then divided by the selection counts. Members never selected get 0.
FitnessTable init_fitness_sampling(const SubpopulationSet& set, const NetworkLayout& layout, std::size_t trial,
                                   const EvalSet& first_batch, Rng& rng, FitnessLedger* ledger = nullptr);

/// Global solution assembled from each subpopulation's best member (lowest
/// index on ties).
Genotype best_of_each(const SubpopulationSet& set, const FitnessTable& fitness);

/// Co-evolutionary DE on the full training set.
RunReport evolve_ccde(const NetworkLayout& layout, const DataSplits& splits, const EngineOptions& options, Rng& rng);

/// Co-evolutionary DE with limited evaluation and fitness inheritance.
RunReport evolve_leccde(const NetworkLayout& layout, const DataSplits& splits, const EngineOptions& options,
                        Rng& rng);

}  // namespace neuroevo
