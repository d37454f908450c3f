#pragma once

#include "executor.hpp"
#include "neuroevo/de_ops.hpp"
#include "neuroevo/engine.hpp"
#include "neuroevo/report.hpp"

#include <chrono>
#include <limits>
#include <span>
#include <string>

namespace neuroevo::detail {

// Bookkeeping shared by the four engines: FE budget, evaluation counters,
// best-validated network, generation records and the final evaluation.
class RunContext {
public:
    RunContext(std::string engine, const NetworkLayout& layout, const DataSplits& splits,
               const EngineOptions& options);

    const NetworkLayout& layout() const { return layout_; }
    const DataSplits& splits() const { return splits_; }
    const EngineOptions& options() const { return options_; }
    const Executor& executor() const { return executor_; }
    FitnessLedger* ledger() const { return options_.ledger; }

    // Members that can still be processed at `unit_cost` FEs each, capped at `limit`.
    std::size_t affordable(std::size_t unit_cost, std::size_t limit) const;
    void charge(std::size_t fes);
    std::size_t fes() const { return report_.evaluations.training; }

    // Uncharged validation-set accuracy.
    double validate(std::span<const double> genotype);
    // Counts a validation evaluation performed elsewhere (incremental path).
    void count_validation() { ++report_.evaluations.validation; }

    // Retains the network if it strictly beats the best validation so far
    // (the first offer is always retained).
    void offer(std::span<const double> genotype, double validation);
    double best_validation() const { return best_validation_; }

    void record_generation(std::size_t generation, std::size_t epoch, std::size_t batch, double best_fitness,
                           double validation);
    void record_subpop_update(std::size_t generation, std::size_t epoch, std::size_t batch, std::size_t subpop,
                              double best_fitness, double validation);

    // Evaluates the retained network on train, validation and test (once each).
    RunReport finish();

private:
    double elapsed() const;

    NetworkLayout layout_;
    const DataSplits& splits_;
    EngineOptions options_;
    Executor executor_;
    std::chrono::steady_clock::time_point start_;
    RunReport report_;
    Genotype best_network_;
    double best_validation_ = -std::numeric_limits<double>::infinity();
    bool has_best_ = false;
};

struct Offspring {
    std::vector<double> trial;
    std::array<std::size_t, 3> donors{};
};

// Draws mutants and trials for the first `count` targets, in target order.
std::vector<Offspring> breed(const Population& pop, std::size_t count, const DEParams& params, Rng& rng);

// Shared precondition checks; throws Error on failure.
void check_splits(const NetworkLayout& layout, const DataSplits& splits);
void check_budget(std::size_t budget, std::size_t init_cost, const char* engine);
void check_batching(const EngineOptions& options, std::size_t train_size);

}  // namespace neuroevo::detail
