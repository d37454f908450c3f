#include "neuroevo/error.hpp"
#include "neuroevo/report.hpp"
#include "neuroevo/runner.hpp"
#include "neuroevo/rng.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace neuroevo;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("neuroevo_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

// Small two-class table with a learnable rule, written once per test.
fs::path write_toy_csv(const fs::path& dir) {
    Rng rng(99);
    const fs::path path = dir / "toy.csv";
    std::ofstream out(path);
    out << "a,b,c,label\n";
    for (int i = 0; i < 120; ++i) {
        const double a = rng.uniform(-3, 3), b = rng.uniform(-3, 3), c = rng.uniform(0, 10);
        out << a << ',' << b << ',' << c << ',' << (a + 0.5 * b > 0 ? "pos" : "neg") << '\n';
    }
    return path;
}

ExperimentConfig toy_config(const fs::path& csv, EngineKind engine) {
    ExperimentConfig c;
    c.engine = engine;
    c.n_hidden = 4;
    c.de.NP = 8;
    c.batch_size = 20;
    c.trial = 2;
    c.fe_budget = 600;
    c.data_path = csv.string();
    c.schema.header = true;
    c.record_timing = false;
    return c;
}

RunReport fake_report(double train, double valid, double test, std::uint64_t seed) {
    RunReport r;
    r.engine = "LECCDE";
    r.seed = seed;
    r.config = {{"engine", "LECCDE"}, {"seed", std::to_string(seed)}, {"hidden", "50"},
                {"split.seed", std::to_string(seed)}};
    r.final.train_accuracy = train;
    r.final.validation_accuracy = valid;
    r.final.test_accuracy = test;
    r.wall_clock_seconds = static_cast<double>(seed);
    return r;
}

}  // namespace

TEST(Median, SortOracle) {
    Rng rng(1);
    for (int t = 0; t < 200; ++t) {
        std::vector<double> v(1 + rng.index(25));
        for (double& x : v) x = static_cast<double>(rng.index(10)) / 10.0;
        auto sorted = v;
        std::ranges::sort(sorted);
        const std::size_t n = sorted.size();
        const double expected = n % 2 ? sorted[n / 2] : (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0;
        EXPECT_EQ(median(v), expected);
    }
}

TEST(Aggregate, SingleReport) {
    const auto s = aggregate({fake_report(0.9, 0.8, 0.7, 1)});
    EXPECT_EQ(s.runs, 1u);
    EXPECT_EQ(s.test.median, 0.7);
    EXPECT_EQ(s.test.variance, 0.0);
    EXPECT_EQ(s.train.variance, 0.0);
}

TEST(Aggregate, ThreeReports) {
    const auto s = aggregate({fake_report(1, 1, 0.90, 1), fake_report(1, 1, 0.94, 2), fake_report(1, 1, 0.92, 3)});
    EXPECT_DOUBLE_EQ(s.test.median, 0.92);
    EXPECT_NEAR(s.test.variance, (0.0004 + 0.0004) / 3.0, 1e-15);
    EXPECT_EQ(s.median_wall_clock, 2.0);
}

TEST(Aggregate, TwentyReportsAgainstOracleAndPermutation) {
    Rng rng(5);
    std::vector<RunReport> reports;
    std::vector<double> tests;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const double t = rng.uniform(0.8, 1.0);
        tests.push_back(t);
        reports.push_back(fake_report(rng.uniform(), rng.uniform(), t, seed));
    }
    std::ranges::sort(tests);
    const auto s = aggregate(reports);
    EXPECT_EQ(s.test.median, (tests[9] + tests[10]) / 2.0);
    for (int k = 0; k < 10; ++k) {
        for (std::size_t i = reports.size(); i > 1; --i) std::swap(reports[i - 1], reports[rng.index(i)]);
        const auto p = aggregate(reports);
        EXPECT_EQ(render_summary(p), render_summary(s));
    }
}

TEST(Aggregate, HeterogeneousConfigsRejected) {
    auto other = fake_report(1, 1, 1, 2);
    other.config[2].second = "40";
    try {
        aggregate({fake_report(1, 1, 1, 1), other});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.category(), ErrorCategory::Config);
    }
    auto engine = fake_report(1, 1, 1, 2);
    engine.engine = "DE";
    EXPECT_THROW(aggregate({fake_report(1, 1, 1, 1), engine}), Error);
    EXPECT_THROW(aggregate({}), Error);
}

TEST(Aggregate, RenderedWithTwoDecimals) {
    const auto text = render_summary(aggregate({fake_report(0.95, 0.9, 0.9529, 1)}));
    EXPECT_NE(text.find("95.29 ± 0.00"), std::string::npos);
    EXPECT_NE(text.find("95.00 ± 0.00"), std::string::npos);
}

TEST(Config, ParsesEveryKey) {
    const auto c = parse_config(
        "engine = LEDE\nseed = 7\nfe_budget = 1234\nhidden = 9\ninputs = 3\noutputs = 2\nF = 0.5\nCR = 0.9\n"
        "NP = 12\ninit_low = -2\ninit_high = 2\nbatch_size = 50\ndecay = 0.3\ntrial = 4\nstandardize = false\n"
        "reshuffle_per_epoch = false\nthreads = 2\nrecord_timing = false\ndata.path = d.csv  # comment\n"
        "data.delimiter = whitespace\ndata.header = true\ndata.label_column = 0\ndata.ignore_columns = 1, 2\n"
        "split.train = 0.6\nsplit.valid = 0.2\nsplit.test = 0.2\nsplit.seed = 5\n",
        "/base");
    EXPECT_EQ(c.engine, EngineKind::LEDE);
    EXPECT_EQ(c.seed, 7u);
    EXPECT_EQ(c.fe_budget, 1234u);
    EXPECT_EQ(c.n_hidden, 9u);
    EXPECT_EQ(c.n_inputs, 3u);
    EXPECT_EQ(c.de.F, 0.5);
    EXPECT_EQ(c.de.NP, 12u);
    EXPECT_EQ(c.de.init_low, -2.0);
    EXPECT_EQ(c.decay, 0.3);
    EXPECT_EQ(c.trial, 4u);
    EXPECT_FALSE(c.standardize);
    EXPECT_FALSE(c.reshuffle_per_epoch);
    EXPECT_EQ(c.threads, 2u);
    EXPECT_EQ(c.data_path, "/base/d.csv");
    EXPECT_EQ(c.schema.delimiter, TableSchema::Delimiter::Whitespace);
    EXPECT_EQ(c.schema.label_column, 0);
    EXPECT_EQ(c.schema.ignore_columns, (std::vector<std::size_t>{1, 2}));
    EXPECT_EQ(c.split.seed, 5u);
    EXPECT_EQ(c.split.train_ratio, 0.6);
}

TEST(Config, ErrorsAreConfigCategory) {
    for (const std::string text : {"engine = GA\n", "nonsense = 1\n", "NP = -3\n", "F = abc\n", "no equals sign\n",
                                   "standardize = maybe\n"}) {
        try {
            parse_config(text);
            ADD_FAILURE() << text;
        } catch (const Error& e) {
            EXPECT_EQ(e.category(), ErrorCategory::Config) << text;
        }
    }
}

TEST(Config, ValidationBeforeEvaluation) {
    ExperimentConfig c;
    c.data_path = "/nonexistent.csv";
    c.fe_budget = 10;  // below trial * NP
    try {
        run_experiment(c);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.category(), ErrorCategory::Config);
    }
    c.fe_budget = 50000;
    try {
        run_experiment(c);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.category(), ErrorCategory::Io);
    }
}

TEST(Run, DeterministicReportsForEveryEngine) {
    const auto dir = scratch_dir("determinism");
    const auto csv = write_toy_csv(dir);
    for (auto engine : {EngineKind::DE, EngineKind::LEDE, EngineKind::CCDE, EngineKind::LECCDE}) {
        auto config = toy_config(csv, engine);
        const auto first = report_to_json(run(config), false);
        const auto second = report_to_json(run(config), false);
        EXPECT_EQ(first, second) << to_string(engine);
        config.threads = 3;
        EXPECT_EQ(report_to_json(run(config), false), first) << to_string(engine);
        config.seed = 2;
        EXPECT_NE(report_to_json(run(config), false), first) << to_string(engine);
    }
}

TEST(Run, InitializationOnlyBudget) {
    const auto dir = scratch_dir("init_only");
    const auto csv = write_toy_csv(dir);
    for (auto engine : {EngineKind::DE, EngineKind::LEDE, EngineKind::CCDE, EngineKind::LECCDE}) {
        auto config = toy_config(csv, engine);
        config.fe_budget = initialization_cost(engine, config.de.NP, config.trial);
        const auto report = run(config);
        ASSERT_EQ(report.generations.size(), 1u);
        EXPECT_EQ(report.generations[0].generation, 0u);
        EXPECT_EQ(report.evaluations.training, config.fe_budget);
        EXPECT_EQ(report.evaluations.test, 1u);
    }
}

TEST(Run, ReportEchoesConfigAndRoundTrips) {
    const auto dir = scratch_dir("roundtrip");
    const auto csv = write_toy_csv(dir);
    auto config = toy_config(csv, EngineKind::LECCDE);
    config.record_timing = true;
    const auto output = run_experiment(config);
    const auto& report = output.report;
    auto resolved = config;  // the echo carries the dimensions derived from the data
    resolved.n_inputs = 3;
    resolved.n_outputs = 2;
    EXPECT_EQ(report.config, resolved_settings(resolved));
    EXPECT_EQ(report.final.layout, (NetworkLayout{3, 4, 2}));
    EXPECT_EQ(report.final.best_network.size(), genotype_len(report.final.layout));
    EXPECT_EQ(output.split.train.size(), 84u);

    const auto path = persist_run(output, config, (dir / "out").string());
    EXPECT_TRUE(fs::exists(dir / "out" / "LECCDE_seed1.split.json"));
    EXPECT_TRUE(fs::exists(dir / "out" / "LECCDE_seed1.genotype"));
    const auto loaded = load_report(path);
    EXPECT_EQ(report_to_json(loaded, true), report_to_json(report, true));
    EXPECT_GT(loaded.wall_clock_seconds, 0.0);
}

TEST(Run, FinalRecordUsesBestValidatedNetwork) {
    const auto dir = scratch_dir("final");
    const auto csv = write_toy_csv(dir);
    for (auto engine : {EngineKind::DE, EngineKind::LEDE, EngineKind::CCDE, EngineKind::LECCDE}) {
        const auto report = run(toy_config(csv, engine));
        double best = 0.0;
        for (const auto& g : report.generations) best = std::max(best, g.validation);
        for (const auto& u : report.subpop_updates) best = std::max(best, u.validation);
        EXPECT_EQ(report.final.validation_accuracy, best) << to_string(engine);
        EXPECT_EQ(report.generations.back().best_validation, best) << to_string(engine);
        EXPECT_EQ(report.evaluations.test, 1u);
        EXPECT_EQ(report.evaluations.final_train, 1u);
    }
}

TEST(Curves, RowsMonotoneAndReproducible) {
    const auto dir = scratch_dir("curves");
    const auto csv = write_toy_csv(dir);
    const auto report = run(toy_config(csv, EngineKind::LECCDE));
    const auto files = emit_curves(report, (dir / "a").string());
    ASSERT_EQ(files.size(), 2u);
    std::istringstream lines(slurp(files[0]));
    std::string line;
    std::getline(lines, line);
    EXPECT_EQ(line.rfind("fes\t", 0), 0u);
    std::size_t rows = 0;
    long previous = -1;
    while (std::getline(lines, line)) {
        const long fes = std::stol(line.substr(0, line.find('\t')));
        EXPECT_GT(fes, previous);
        previous = fes;
        ++rows;
    }
    EXPECT_EQ(rows, report.generations.size());

    const auto saved = dir / "r.json";
    save_report(report, saved.string(), true);
    const auto again = emit_curves(load_report(saved.string()), (dir / "b").string());
    EXPECT_EQ(slurp(files[0]), slurp(again[0]));
    EXPECT_EQ(slurp(files[1]), slurp(again[1]));
}

TEST(Curves, UnwritablePathIsError) {
    RunReport report = fake_report(1, 1, 1, 1);
    EXPECT_THROW(emit_curves(report, "/proc/neuroevo/curves"), Error);
}

TEST(AggregateDirectory, ReadsPersistedRuns) {
    const auto dir = scratch_dir("aggregate_dir");
    const auto csv = write_toy_csv(dir);
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        auto config = toy_config(csv, EngineKind::LECCDE);
        config.seed = seed;
        persist_run(run_experiment(config), config, (dir / "runs").string());
    }
    const auto summary = aggregate_directory((dir / "runs").string(), (dir / "summary.tsv").string());
    EXPECT_EQ(summary.runs, 3u);
    EXPECT_NE(slurp(dir / "summary.tsv").find("LECCDE\t3\t"), std::string::npos);
    EXPECT_THROW(aggregate_directory((dir / "empty").string(), (dir / "x.tsv").string()), Error);
}

TEST(EngineKinds, CostsAndNames) {
    EXPECT_EQ(parse_engine("LECCDE"), EngineKind::LECCDE);
    EXPECT_THROW(parse_engine("PSO"), Error);
    EXPECT_EQ(initialization_cost(EngineKind::DE, 20, 5), 20u);
    EXPECT_EQ(initialization_cost(EngineKind::LEDE, 20, 5), 20u);
    EXPECT_EQ(initialization_cost(EngineKind::CCDE, 20, 5), 100u);
    EXPECT_EQ(initialization_cost(EngineKind::LECCDE, 20, 5), 100u);
    EXPECT_EQ(member_cost(EngineKind::LEDE), 2 * member_cost(EngineKind::DE));
    EXPECT_EQ(member_cost(EngineKind::LECCDE), 2 * member_cost(EngineKind::CCDE));
}
