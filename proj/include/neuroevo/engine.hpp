#pragma once

#include "neuroevo/ffnet.hpp"

#include <array>
#include <cstddef>
#include <vector>

namespace neuroevo {

struct DataSplits {
    EvalSet train;
    EvalSet valid;
    EvalSet test;
};

/// rand/1/bin control parameters and initialization bounds.
struct DEParams {
    double F = 0.1;
    double CR = 0.3;
    std::size_t NP = 20;
    double init_low = -1.0;
    double init_high = 1.0;

    /// Requires F > 0, CR in [0, 1], NP >= 4 and init_low < init_high.
    void validate() const;
};

/// Raw evaluation log of a run, for replaying the fitness bookkeeping.
///
/// Single-population engines log as subpopulation 0.
struct FitnessLedger {
    struct InitSample {
        std::vector<std::size_t> members;  // chosen member per subpopulation
        double accuracy = 0.0;
    };
    struct MemberStep {
        std::size_t generation = 0;
        std::size_t epoch = 0;
        std::size_t batch = 0;
        std::size_t subpop = 0;
        std::size_t member = 0;
        std::array<std::size_t, 3> donors{};
        double raw_target = 0.0;  // engines without re-evaluation log the stored fitness
        double raw_trial = 0.0;
        double adjusted_target = 0.0;
        double adjusted_trial = 0.0;
        bool kept_trial = false;
    };
    struct Commit {
        std::size_t generation = 0;
        std::size_t subpop = 0;
        std::vector<double> fitness;  // stored fitness row after the synchronous update
    };

    std::vector<InitSample> init_samples;
    std::vector<std::vector<double>> initial_fitness;  // one row per subpopulation
    std::vector<MemberStep> steps;
    std::vector<Commit> commits;
};

struct EngineOptions {
    DEParams de;
    std::size_t fe_budget = 0;
    /// Limited-evaluation engines only.
    std::size_t batch_size = 0;
    double decay = 0.2;
    bool reshuffle_per_epoch = true;
    /// Co-evolutionary engines only.
    std::size_t trial = 5;

    std::size_t threads = 1;
    bool record_timing = true;
    FitnessLedger* ledger = nullptr;
};

}  // namespace neuroevo
