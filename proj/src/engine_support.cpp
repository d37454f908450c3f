#include "engine_support.hpp"

#include "neuroevo/error.hpp"
#include "neuroevo/limited_evaluation.hpp"

#include <algorithm>
#include <cmath>

namespace neuroevo {

void DEParams::validate() const {
    if (!(F > 0.0) || !std::isfinite(F)) {
        throw Error(ErrorCategory::InvalidArgument, "scale factor F must be positive, got " + std::to_string(F));
    }
    if (!(CR >= 0.0 && CR <= 1.0)) {
        throw Error(ErrorCategory::InvalidArgument, "crossover rate CR must lie in [0, 1], got " + std::to_string(CR));
    }
    if (NP < 4) {
        throw Error(ErrorCategory::InvalidArgument,
                    "population size NP must be at least 4 for rand/1, got " + std::to_string(NP));
    }
    if (!(init_low < init_high) || !std::isfinite(init_low) || !std::isfinite(init_high)) {
        throw Error(ErrorCategory::InvalidArgument, "initialization bounds must satisfy init_low < init_high");
    }
}

namespace detail {

RunContext::RunContext(std::string engine, const NetworkLayout& layout, const DataSplits& splits,
                       const EngineOptions& options)
    : layout_(layout), splits_(splits), options_(options), executor_(options.threads),
      start_(std::chrono::steady_clock::now()) {
    report_.engine = std::move(engine);
    report_.fe_budget = options.fe_budget;
    report_.has_timing = options.record_timing;
    report_.threads = options.threads;
}

std::size_t RunContext::affordable(std::size_t unit_cost, std::size_t limit) const {
    const std::size_t remaining = options_.fe_budget - fes();
    return std::min(limit, remaining / unit_cost);
}

void RunContext::charge(std::size_t fes) {
    if (report_.evaluations.training + fes > options_.fe_budget) {
        throw Error(ErrorCategory::Runtime, "engine attempted to exceed the FE budget");
    }
    report_.evaluations.training += fes;
}

double RunContext::validate(std::span<const double> genotype) {
    ++report_.evaluations.validation;
    return accuracy(genotype, layout_, splits_.valid);
}

void RunContext::offer(std::span<const double> genotype, double validation) {
    if (!has_best_ || validation > best_validation_) {
        best_network_.assign(genotype.begin(), genotype.end());
        best_validation_ = validation;
        has_best_ = true;
    }
}

double RunContext::elapsed() const {
    if (!options_.record_timing) return 0.0;
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
}

void RunContext::record_generation(std::size_t generation, std::size_t epoch, std::size_t batch,
                                   double best_fitness, double validation) {
    report_.generations.push_back(
        GenerationRecord{generation, epoch, batch, fes(), best_fitness, validation, best_validation_, elapsed()});
}

void RunContext::record_subpop_update(std::size_t generation, std::size_t epoch, std::size_t batch,
                                      std::size_t subpop, double best_fitness, double validation) {
    report_.subpop_updates.push_back(
        SubpopUpdateRecord{generation, epoch, batch, subpop, fes(), best_fitness, validation, best_validation_});
}

RunReport RunContext::finish() {
    if (!has_best_) throw Error(ErrorCategory::Runtime, "engine finished without a validated network");
    auto& final = report_.final;
    final.layout = layout_;
    final.best_network = best_network_;
    final.train_accuracy = accuracy(best_network_, layout_, splits_.train);
    ++report_.evaluations.final_train;
    final.validation_accuracy = accuracy(best_network_, layout_, splits_.valid);
    ++report_.evaluations.validation;
    final.test_accuracy = accuracy(best_network_, layout_, splits_.test);
    ++report_.evaluations.test;
    report_.wall_clock_seconds = elapsed();
    return report_;
}

std::vector<Offspring> breed(const Population& pop, std::size_t count, const DEParams& params, Rng& rng) {
    std::vector<Offspring> offspring(count);
    for (std::size_t j = 0; j < count; ++j) {
        auto mutant = mutate_rand1(pop, j, params.F, rng);
        offspring[j].trial = crossover_binomial(pop.member(j), mutant.genes, params.CR, rng);
        offspring[j].donors = mutant.donors;
    }
    return offspring;
}

void check_splits(const NetworkLayout& layout, const DataSplits& splits) {
    layout.validate();
    const std::pair<const EvalSet*, const char*> sets[] = {
        {&splits.train, "training"}, {&splits.valid, "validation"}, {&splits.test, "test"}};
    for (const auto& [set, name] : sets) {
        if (set->empty()) throw Error(ErrorCategory::InvalidArgument, std::string(name) + " split is empty");
        if (set->n_features() != layout.n_inputs) {
            throw_dimension_mismatch(std::string(name) + " features", layout.n_inputs, set->n_features());
        }
        for (std::size_t label : set->labels()) {
            if (label >= layout.n_outputs) {
                throw Error(ErrorCategory::InvalidArgument, std::string(name) + " split has label " +
                                                                std::to_string(label) + " but the network has " +
                                                                std::to_string(layout.n_outputs) + " outputs");
            }
        }
    }
}

void check_budget(std::size_t budget, std::size_t init_cost, const char* engine) {
    if (budget < init_cost) {
        throw Error(ErrorCategory::Budget, std::string(engine) + " needs at least " + std::to_string(init_cost) +
                                               " FEs for initialization, budget is " + std::to_string(budget));
    }
}

void check_batching(const EngineOptions& options, std::size_t train_size) {
    InheritanceParams{options.decay}.validate();
    if (options.batch_size == 0 || options.batch_size > train_size) {
        throw Error(ErrorCategory::InvalidArgument, "batch size " + std::to_string(options.batch_size) +
                                                        " must lie in [1, " + std::to_string(train_size) + "]");
    }
}

}  // namespace detail
}  // namespace neuroevo
