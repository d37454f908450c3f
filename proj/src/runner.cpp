#include "neuroevo/runner.hpp"

#include "neuroevo/coevolution.hpp"
#include "neuroevo/de_ops.hpp"
#include "neuroevo/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace fs = std::filesystem;

namespace neuroevo {

const char* to_string(EngineKind engine) {
    switch (engine) {
        case EngineKind::DE: return "DE";
        case EngineKind::LEDE: return "LEDE";
        case EngineKind::CCDE: return "CCDE";
        case EngineKind::LECCDE: return "LECCDE";
    }
    return "?";
}

EngineKind parse_engine(const std::string& name) {
    std::string upper = name;
    std::ranges::transform(upper, upper.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    if (upper == "DE") return EngineKind::DE;
    if (upper == "LEDE") return EngineKind::LEDE;
    if (upper == "CCDE") return EngineKind::CCDE;
    if (upper == "LECCDE") return EngineKind::LECCDE;
    throw Error(ErrorCategory::Config, "unknown engine '" + name + "' (expected DE, LEDE, CCDE or LECCDE)");
}

std::size_t initialization_cost(EngineKind engine, std::size_t np, std::size_t trial) {
    return uses_subpopulations(engine) ? trial * np : np;
}

std::size_t member_cost(EngineKind engine) { return uses_batches(engine) ? 2 : 1; }

namespace {

std::string format_double(double value) {
    char buffer[64];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return {buffer, result.ptr};
}

std::string trim(const std::string& text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = text.find_last_not_of(" \t\r\n");
    return text.substr(first, last - first + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
    T parsed{};
    const auto result = std::from_chars(value.data(), value.data() + value.size(), parsed);
    if (value.empty() || result.ec != std::errc{} || result.ptr != value.data() + value.size()) {
        throw Error(ErrorCategory::Config, "setting '" + key + "': cannot parse '" + value + "' as a number");
    }
    if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(parsed)) throw Error(ErrorCategory::Config, "setting '" + key + "' must be finite");
    }
    return parsed;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
    if (value == "false" || value == "0" || value == "no" || value == "off") return false;
    throw Error(ErrorCategory::Config, "setting '" + key + "': expected a boolean, got '" + value + "'");
}

std::string join(const std::vector<std::size_t>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) out += (i ? "," : "") + std::to_string(values[i]);
    return out;
}

}  // namespace

void apply_setting(ExperimentConfig& c, const std::string& raw_key, const std::string& raw_value) {
    const std::string key = trim(raw_key);
    const std::string value = trim(raw_value);
    if (key == "engine") c.engine = parse_engine(value);
    else if (key == "seed") c.seed = parse_number<std::uint64_t>(key, value);
    else if (key == "fe_budget") c.fe_budget = parse_number<std::size_t>(key, value);
    else if (key == "hidden") c.n_hidden = parse_number<std::size_t>(key, value);
    else if (key == "inputs") c.n_inputs = parse_number<std::size_t>(key, value);
    else if (key == "outputs") c.n_outputs = parse_number<std::size_t>(key, value);
    else if (key == "F") c.de.F = parse_number<double>(key, value);
    else if (key == "CR") c.de.CR = parse_number<double>(key, value);
    else if (key == "NP") c.de.NP = parse_number<std::size_t>(key, value);
    else if (key == "init_low") c.de.init_low = parse_number<double>(key, value);
    else if (key == "init_high") c.de.init_high = parse_number<double>(key, value);
    else if (key == "batch_size") c.batch_size = parse_number<std::size_t>(key, value);
    else if (key == "decay") c.decay = parse_number<double>(key, value);
    else if (key == "trial") c.trial = parse_number<std::size_t>(key, value);
    else if (key == "standardize") c.standardize = parse_bool(key, value);
    else if (key == "reshuffle_per_epoch") c.reshuffle_per_epoch = parse_bool(key, value);
    else if (key == "threads") c.threads = parse_number<std::size_t>(key, value);
    else if (key == "record_timing") c.record_timing = parse_bool(key, value);
    else if (key == "data.path") c.data_path = value;
    else if (key == "data.delimiter") {
        if (value == "comma") c.schema.delimiter = TableSchema::Delimiter::Comma;
        else if (value == "whitespace") c.schema.delimiter = TableSchema::Delimiter::Whitespace;
        else throw Error(ErrorCategory::Config, "data.delimiter must be 'comma' or 'whitespace'");
    } else if (key == "data.header") c.schema.header = parse_bool(key, value);
    else if (key == "data.label_column") c.schema.label_column = parse_number<long>(key, value);
    else if (key == "data.ignore_columns") {
        c.schema.ignore_columns.clear();
        std::istringstream list(value);
        std::string item;
        while (std::getline(list, item, ',')) {
            if (!trim(item).empty()) c.schema.ignore_columns.push_back(parse_number<std::size_t>(key, trim(item)));
        }
    } else if (key == "split.train") c.split.train_ratio = parse_number<double>(key, value);
    else if (key == "split.valid") c.split.valid_ratio = parse_number<double>(key, value);
    else if (key == "split.test") c.split.test_ratio = parse_number<double>(key, value);
    else if (key == "split.seed") c.split.seed = parse_number<std::uint64_t>(key, value);
    else throw Error(ErrorCategory::Config, "unknown setting '" + key + "'");
}

void ExperimentConfig::validate() const {
    auto fail = [](const std::string& message) { throw Error(ErrorCategory::Config, message); };
    try {
        de.validate();
        split.validate();
    } catch (const Error& e) {
        fail(e.what());
    }
    if (n_hidden == 0) fail("hidden must be positive");
    if (data_path.empty()) fail("data.path is required");
    if (uses_batches(engine)) {
        if (batch_size == 0) fail("batch_size must be positive for " + std::string(to_string(engine)));
        if (!(decay >= 0.0 && decay <= 1.0)) fail("decay must lie in [0, 1]");
    }
    if (uses_subpopulations(engine) && trial == 0) fail("trial must be at least 1");
    if (threads == 0) fail("threads must be at least 1");
    const std::size_t init = initialization_cost(engine, de.NP, trial);
    if (fe_budget < init) {
        fail("fe_budget " + std::to_string(fe_budget) + " is below the initialization cost " + std::to_string(init) +
             " of " + to_string(engine));
    }
}

ExperimentConfig parse_config(const std::string& text, const std::string& base_dir) {
    ExperimentConfig config;
    std::istringstream in(text);
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorCategory::Config, "config line " + std::to_string(number) + ": expected `key = value`");
        }
        try {
            apply_setting(config, line.substr(0, eq), line.substr(eq + 1));
        } catch (const Error& e) {
            throw Error(ErrorCategory::Config, "config line " + std::to_string(number) + ": " + e.what());
        }
    }
    if (!config.data_path.empty() && !base_dir.empty() && fs::path(config.data_path).is_relative()) {
        config.data_path = (fs::path(base_dir) / config.data_path).lexically_normal().string();
    }
    return config;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCategory::Io, "cannot open config file: " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), fs::path(path).parent_path().string());
}

std::vector<std::pair<std::string, std::string>> resolved_settings(const ExperimentConfig& c) {
    return {
        {"engine", to_string(c.engine)},
        {"seed", std::to_string(c.seed)},
        {"fe_budget", std::to_string(c.fe_budget)},
        {"inputs", std::to_string(c.n_inputs)},
        {"hidden", std::to_string(c.n_hidden)},
        {"outputs", std::to_string(c.n_outputs)},
        {"F", format_double(c.de.F)},
        {"CR", format_double(c.de.CR)},
        {"NP", std::to_string(c.de.NP)},
        {"init_low", format_double(c.de.init_low)},
        {"init_high", format_double(c.de.init_high)},
        {"batch_size", std::to_string(c.batch_size)},
        {"decay", format_double(c.decay)},
        {"trial", std::to_string(c.trial)},
        {"reshuffle_per_epoch", c.reshuffle_per_epoch ? "true" : "false"},
        {"standardize", c.standardize ? "true" : "false"},
        {"data.path", c.data_path},
        {"data.delimiter", c.schema.delimiter == TableSchema::Delimiter::Comma ? "comma" : "whitespace"},
        {"data.header", c.schema.header ? "true" : "false"},
        {"data.label_column", std::to_string(c.schema.label_column)},
        {"data.ignore_columns", join(c.schema.ignore_columns)},
        {"split.train", format_double(c.split.train_ratio)},
        {"split.valid", format_double(c.split.valid_ratio)},
        {"split.test", format_double(c.split.test_ratio)},
        {"split.seed", std::to_string(c.split.seed)},
    };
}

RunReport run_engine(EngineKind engine, const NetworkLayout& layout, const DataSplits& splits,
                     const EngineOptions& options, std::uint64_t seed) {
    Rng rng(seed);
    switch (engine) {
        case EngineKind::DE: return evolve_de(layout, splits, options, rng);
        case EngineKind::LEDE: return evolve_lede(layout, splits, options, rng);
        case EngineKind::CCDE: return evolve_ccde(layout, splits, options, rng);
        case EngineKind::LECCDE: return evolve_leccde(layout, splits, options, rng);
    }
    throw Error(ErrorCategory::Config, "unknown engine");
}

RunOutput run_experiment(const ExperimentConfig& config, FitnessLedger* ledger) {
    config.validate();
    const LabeledDataset dataset = load_table(config.data_path, config.schema);
    DatasetSplits parts = split(dataset, config.split);

    NetworkLayout layout{dataset.n_features, config.n_hidden, dataset.n_classes()};
    if (config.n_inputs != 0 && config.n_inputs != layout.n_inputs) {
        throw Error(ErrorCategory::Config, "inputs = " + std::to_string(config.n_inputs) + " but the data has " +
                                               std::to_string(layout.n_inputs) + " features");
    }
    if (config.n_outputs != 0 && config.n_outputs != layout.n_outputs) {
        throw Error(ErrorCategory::Config, "outputs = " + std::to_string(config.n_outputs) + " but the data has " +
                                               std::to_string(layout.n_outputs) + " classes");
    }
    if (uses_batches(config.engine) && config.batch_size > parts.train.size()) {
        throw Error(ErrorCategory::Config, "batch_size " + std::to_string(config.batch_size) +
                                               " exceeds the training split size " +
                                               std::to_string(parts.train.size()));
    }

    if (config.standardize) {
        const Standardizer standardizer = fit_standardizer(parts.train);
        parts.train = standardizer.apply(parts.train);
        parts.valid = standardizer.apply(parts.valid);
        parts.test = standardizer.apply(parts.test);
    }
    const DataSplits splits{to_eval_set(parts.train), to_eval_set(parts.valid), to_eval_set(parts.test)};

    EngineOptions options;
    options.de = config.de;
    options.fe_budget = config.fe_budget;
    options.batch_size = config.batch_size;
    options.decay = config.decay;
    options.reshuffle_per_epoch = config.reshuffle_per_epoch;
    options.trial = config.trial;
    options.threads = config.threads;
    options.record_timing = config.record_timing;
    options.ledger = ledger;

    RunOutput output;
    output.report = run_engine(config.engine, layout, splits, options, config.seed);
    output.report.seed = config.seed;
    ExperimentConfig resolved = config;
    resolved.n_inputs = layout.n_inputs;
    resolved.n_outputs = layout.n_outputs;
    output.report.config = resolved_settings(resolved);
    output.split = std::move(parts.indices);
    return output;
}

std::string run_stem(const RunReport& report) { return report.engine + "_seed" + std::to_string(report.seed); }

namespace {

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCategory::Io, "cannot write " + path.string());
    out << text;
    if (!out) throw Error(ErrorCategory::Io, "failed writing " + path.string());
}

void ensure_directory(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw Error(ErrorCategory::Io, "cannot create directory " + dir.string());
}

}  // namespace

std::string persist_run(const RunOutput& output, const ExperimentConfig& config, const std::string& out_dir) {
    const fs::path dir(out_dir);
    ensure_directory(dir);
    const std::string stem = run_stem(output.report);
    const fs::path report_path = dir / (stem + ".report.json");
    write_text(report_path, report_to_json(output.report, config.record_timing));
    write_text(dir / (stem + ".split.json"), split_manifest_json(output.split, config.split));
    std::ostringstream genotype;
    write_genotype(genotype, output.report.final.layout, output.report.final.best_network);
    write_text(dir / (stem + ".genotype"), genotype.str());
    return report_path.string();
}

double median(std::vector<double> values) {
    if (values.empty()) throw Error(ErrorCategory::InvalidArgument, "median of an empty list");
    std::ranges::sort(values);
    const std::size_t n = values.size();
    return n % 2 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

namespace {

AccuracySummary summarize(const std::vector<double>& values) {
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double squares = 0.0;
    for (double v : values) squares += (v - mean) * (v - mean);
    return {median(values), squares / static_cast<double>(values.size())};
}

// Settings that may differ between runs of one experiment.
bool is_seed_key(const std::string& key) { return key == "seed" || key == "split.seed"; }

}  // namespace

Summary aggregate(const std::vector<RunReport>& reports) {
    if (reports.empty()) throw Error(ErrorCategory::InvalidArgument, "aggregate needs at least one report");
    auto comparable = [](const RunReport& r) {
        std::vector<std::pair<std::string, std::string>> kept;
        for (const auto& kv : r.config) {
            if (!is_seed_key(kv.first)) kept.push_back(kv);
        }
        return kept;
    };
    const auto reference = comparable(reports.front());
    std::vector<double> train, valid, test, clock;
    for (const auto& r : reports) {
        if (r.engine != reports.front().engine || comparable(r) != reference) {
            throw Error(ErrorCategory::Config, "cannot aggregate reports with different configurations (" +
                                                   run_stem(reports.front()) + " vs " + run_stem(r) + ")");
        }
        train.push_back(r.final.train_accuracy);
        valid.push_back(r.final.validation_accuracy);
        test.push_back(r.final.test_accuracy);
        clock.push_back(r.wall_clock_seconds);
    }
    return {reports.front().engine, reports.size(), summarize(train), summarize(valid), summarize(test),
            median(clock)};
}

std::string render_summary(const Summary& s) {
    auto cell = [](const AccuracySummary& a) {
        char buffer[64];
        std::snprintf(buffer, sizeof(buffer), "%.2f ± %.2f", 100.0 * a.median, 10000.0 * a.variance);
        return std::string(buffer);
    };
    char clock[32];
    std::snprintf(clock, sizeof(clock), "%.2f", s.median_wall_clock);
    std::ostringstream out;
    out << "engine\truns\ttrain\tvalidation\ttest\tmedian_wall_clock_s\n";
    out << s.engine << '\t' << s.runs << '\t' << cell(s.train) << '\t' << cell(s.validation) << '\t' << cell(s.test)
        << '\t' << clock << '\n';
    return out.str();
}

Summary aggregate_directory(const std::string& in_dir, const std::string& out_file) {
    if (!fs::is_directory(in_dir)) throw Error(ErrorCategory::Io, "not a directory: " + in_dir);
    std::vector<fs::path> paths;
    for (const auto& entry : fs::directory_iterator(in_dir)) {
        const std::string name = entry.path().filename().string();
        if (entry.is_regular_file() && name.ends_with(".report.json")) paths.push_back(entry.path());
    }
    if (paths.empty()) throw Error(ErrorCategory::Data, "no *.report.json files in " + in_dir);
    std::ranges::sort(paths);
    std::vector<RunReport> reports;
    for (const auto& path : paths) reports.push_back(load_report(path.string()));
    const Summary summary = aggregate(reports);
    write_text(out_file, render_summary(summary));
    return summary;
}

std::vector<std::string> emit_curves(const RunReport& report, const std::string& out_dir) {
    const fs::path dir(out_dir);
    ensure_directory(dir);
    const std::string stem = run_stem(report);

    std::ostringstream curve;
    curve << "fes\tgeneration\tepoch\tbatch\tbest_fitness\tvalidation\tbest_validation\telapsed_seconds\n";
    for (const auto& g : report.generations) {
        curve << g.fes << '\t' << g.generation << '\t' << g.epoch << '\t' << g.batch << '\t'
              << format_double(g.best_fitness) << '\t' << format_double(g.validation) << '\t'
              << format_double(g.best_validation) << '\t' << format_double(g.elapsed_seconds) << '\n';
    }
    std::vector<std::string> written{(dir / (stem + ".curve.tsv")).string()};
    write_text(written.front(), curve.str());

    if (!report.subpop_updates.empty()) {
        std::ostringstream trace;
        trace << "fes\tgeneration\tepoch\tbatch\tsubpop\tbest_fitness\tvalidation\tbest_validation\n";
        for (const auto& s : report.subpop_updates) {
            trace << s.fes << '\t' << s.generation << '\t' << s.epoch << '\t' << s.batch << '\t' << s.subpop << '\t'
                  << format_double(s.best_fitness) << '\t' << format_double(s.validation) << '\t'
                  << format_double(s.best_validation) << '\n';
        }
        written.push_back((dir / (stem + ".subpop.tsv")).string());
        write_text(written.back(), trace.str());
    }
    return written;
}

}  // namespace neuroevo
