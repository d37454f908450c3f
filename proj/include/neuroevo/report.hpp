#pragma once

#include "neuroevo/ffnet.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace neuroevo {

/// State at the end of one generation. For single-population engines a
/// generation is one pass over the population; for co-evolutionary engines it
/// is one pass over every subpopulation. Limited-evaluation engines run one
/// generation per batch. Generation 0 is the initialized population.
struct GenerationRecord {
    std::size_t generation = 0;
    std::size_t epoch = 0;
    std::size_t batch = 0;
    std::size_t fes = 0;
    /// Highest stored fitness. Full training accuracy for DE/CCDE, the
    /// inherited batch fitness for LEDE/LECCDE.
    double best_fitness = 0.0;
    /// Validation accuracy of the network validated at the end of the generation.
    double validation = 0.0;
    double best_validation = 0.0;
    double elapsed_seconds = 0.0;
};

/// One subpopulation update of a co-evolutionary engine.
struct SubpopUpdateRecord {
    std::size_t generation = 0;
    std::size_t epoch = 0;
    std::size_t batch = 0;
    std::size_t subpop = 0;
    std::size_t fes = 0;
    double best_fitness = 0.0;
    double validation = 0.0;
    double best_validation = 0.0;
};

/// Count of network evaluations per data context. Only `training` is charged
/// to the FE budget.
struct EvaluationCounts {
    std::size_t training = 0;
    std::size_t validation = 0;
    std::size_t final_train = 0;
    std::size_t test = 0;
};

struct FinalRecord {
    NetworkLayout layout;
    Genotype best_network;
    double train_accuracy = 0.0;
    double validation_accuracy = 0.0;
    double test_accuracy = 0.0;
};

struct RunReport {
    std::string engine;
    std::uint64_t seed = 0;
    /// Fully resolved configuration, in canonical key order.
    std::vector<std::pair<std::string, std::string>> config;
    std::size_t fe_budget = 0;
    std::vector<GenerationRecord> generations;
    std::vector<SubpopUpdateRecord> subpop_updates;
    EvaluationCounts evaluations;
    FinalRecord final;

    // Execution details, excluded from the canonical (timing-free) document.
    bool has_timing = false;
    double wall_clock_seconds = 0.0;
    std::size_t threads = 1;
};

/// Serializes a report as a JSON document. Without timing, the output is a
/// pure function of the configuration and seed.
std::string report_to_json(const RunReport& report, bool include_timing);
RunReport report_from_json(const std::string& text);

void save_report(const RunReport& report, const std::string& path, bool include_timing);
RunReport load_report(const std::string& path);

}  // namespace neuroevo
