#pragma once

#include "neuroevo/dataset.hpp"
#include "neuroevo/engine.hpp"
#include "neuroevo/report.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace neuroevo {

enum class EngineKind { DE, LEDE, CCDE, LECCDE };

const char* to_string(EngineKind engine);
EngineKind parse_engine(const std::string& name);

inline bool uses_batches(EngineKind e) { return e == EngineKind::LEDE || e == EngineKind::LECCDE; }
inline bool uses_subpopulations(EngineKind e) { return e == EngineKind::CCDE || e == EngineKind::LECCDE; }

/// FEs charged before the first generation.
std::size_t initialization_cost(EngineKind engine, std::size_t np, std::size_t trial);
/// FEs charged per processed population member.
std::size_t member_cost(EngineKind engine);

struct ExperimentConfig {
    EngineKind engine = EngineKind::LECCDE;
    std::size_t n_hidden = 50;
    /// 0 derives the value from the data; otherwise it must match.
    std::size_t n_inputs = 0;
    std::size_t n_outputs = 0;
    DEParams de;
    std::size_t batch_size = 100;
    double decay = 0.2;
    std::size_t trial = 5;
    std::size_t fe_budget = 50000;
    std::uint64_t seed = 1;

    std::string data_path;
    TableSchema schema;
    SplitSpec split;
    bool standardize = true;
    bool reshuffle_per_epoch = true;

    // Execution settings; they do not influence results.
    std::size_t threads = 1;
    bool record_timing = true;

    /// Field-level checks that need no data (throws Error{Config}).
    void validate() const;
};

/// Applies one `key = value` setting. Unknown keys and bad values throw Error{Config}.
void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value);

/// Flat `key = value` text; `#` starts a comment. Relative data paths are
/// resolved against `base_dir`.
ExperimentConfig parse_config(const std::string& text, const std::string& base_dir = "");
ExperimentConfig load_config(const std::string& path);

/// Every result-affecting setting, in canonical order, as written to reports.
std::vector<std::pair<std::string, std::string>> resolved_settings(const ExperimentConfig& config);

struct RunOutput {
    RunReport report;
    SplitIndices split;
};

/// Loads and splits the data, standardizes if enabled, runs the engine and
/// evaluates the retained network on the test split once.
RunOutput run_experiment(const ExperimentConfig& config, FitnessLedger* ledger = nullptr);

inline RunReport run(const ExperimentConfig& config) { return run_experiment(config).report; }

/// Engine dispatch on prepared splits.
RunReport run_engine(EngineKind engine, const NetworkLayout& layout, const DataSplits& splits,
                     const EngineOptions& options, std::uint64_t seed);

/// File stem shared by all outputs of one run, e.g. `LECCDE_seed7`.
std::string run_stem(const RunReport& report);

/// Writes `<stem>.report.json`, `<stem>.split.json` and `<stem>.genotype` into
/// `out_dir` (created if missing). Returns the report path.
std::string persist_run(const RunOutput& output, const ExperimentConfig& config, const std::string& out_dir);

struct AccuracySummary {
    double median = 0.0;
    double variance = 0.0;  // population variance
};

struct Summary {
    std::string engine;
    std::size_t runs = 0;
    AccuracySummary train;
    AccuracySummary validation;
    AccuracySummary test;
    double median_wall_clock = 0.0;
};

/// Median and variance over runs that differ at most in their seeds.
Summary aggregate(const std::vector<RunReport>& reports);

/// Percent values with two decimals, `median ± variance`.
std::string render_summary(const Summary& summary);

/// Aggregates every `*.report.json` in a directory into `out_file`.
Summary aggregate_directory(const std::string& in_dir, const std::string& out_file);

double median(std::vector<double> values);

/// Writes `<stem>.curve.tsv` (one row per generation, x = cumulative FEs) and,
/// for co-evolutionary runs, `<stem>.subpop.tsv`. Returns the written paths.
std::vector<std::string> emit_curves(const RunReport& report, const std::string& out_dir);

}  // namespace neuroevo
