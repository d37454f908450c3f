#include "neuroevo/coevolution.hpp"
#include "neuroevo/error.hpp"
#include "neuroevo/report.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace neuroevo;
namespace nt = neuroevo::testing;

namespace {

EngineOptions cc_options(std::size_t budget, std::size_t np, std::size_t trial, std::size_t batch) {
    EngineOptions options;
    options.de.NP = np;
    options.fe_budget = budget;
    options.trial = trial;
    options.batch_size = batch;
    options.record_timing = false;
    return options;
}

}  // namespace

TEST(Decompose, WbcLayout) {
    const auto d = decompose({30, 50, 2});
    ASSERT_EQ(d.subpop_count(), 52u);
    for (std::size_t i = 0; i < 50; ++i) EXPECT_EQ(d.blocks[i], (Decomposition::Block{31 * i, 31}));
    EXPECT_EQ(d.blocks[50], (Decomposition::Block{1550, 51}));
    EXPECT_EQ(d.blocks[51], (Decomposition::Block{1601, 51}));
}

TEST(Decompose, TilesGenotype) {
    for (const NetworkLayout layout : {NetworkLayout{1, 1, 1}, NetworkLayout{561, 50, 6}, NetworkLayout{7, 3, 4}}) {
        const auto d = decompose(layout);
        EXPECT_EQ(d.subpop_count(), layout.n_hidden + layout.n_outputs);
        std::size_t next = 0;
        for (const auto& block : d.blocks) {
            EXPECT_EQ(block.offset, next);
            next += block.length;
        }
        EXPECT_EQ(next, genotype_len(layout));
    }
    EXPECT_THROW(decompose({0, 1, 1}), Error);
}

TEST(Splice, ReplacesOnlyTheBlock) {
    const NetworkLayout layout{2, 2, 2};
    const auto d = decompose(layout);
    const std::vector<double> global(genotype_len(layout), 0.0);
    const std::vector<double> member{7, 8, 9};
    const auto spliced = splice(global, d, 3, member);
    EXPECT_EQ(spliced, (std::vector<double>{0, 0, 0, 0, 0, 0, 0, 0, 0, 7, 8, 9}));
    EXPECT_THROW(splice(global, d, 4, member), Error);
    EXPECT_THROW(splice(global, d, 0, std::vector<double>{1, 2}), Error);
}

TEST(InitSampling, ReplayOfLoggedAssemblies) {
    const NetworkLayout layout{2, 1, 1};  // two subpopulations
    DEParams params;
    params.NP = 2;
    Rng rng(12);
    const auto set = init_subpopulations(decompose(layout), params, rng);
    const auto batch = nt::make_random_set(20, 2, 1, 4);
    FitnessLedger ledger;
    const auto table = init_fitness_sampling(set, layout, 2, batch, rng, &ledger);
    ASSERT_EQ(ledger.init_samples.size(), 4u);

    double sums[2][2] = {};
    int counts[2][2] = {};
    for (const auto& sample : ledger.init_samples) {
        for (std::size_t i = 0; i < 2; ++i) {
            sums[i][sample.members[i]] += sample.accuracy;
            ++counts[i][sample.members[i]];
        }
    }
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            const double expected = counts[i][j] ? sums[i][j] / counts[i][j] : 0.0;
            EXPECT_NEAR(table.values[i][j], expected, 1e-15);
            EXPECT_EQ(table.counts[i][j], static_cast<std::size_t>(counts[i][j]));
        }
    }
}

TEST(InitSampling, LoggedAccuracyMatchesAssembledNetwork) {
    const NetworkLayout layout{3, 2, 3};
    DEParams params;
    params.NP = 5;
    Rng rng(2);
    const auto set = init_subpopulations(decompose(layout), params, rng);
    const auto batch = nt::make_random_set(40, 3, 3, 8);
    FitnessLedger ledger;
    init_fitness_sampling(set, layout, 3, batch, rng, &ledger);
    ASSERT_EQ(ledger.init_samples.size(), 15u);
    for (const auto& sample : ledger.init_samples) {
        Genotype assembled;
        for (std::size_t i = 0; i < set.subpops.size(); ++i) {
            const auto m = set.subpops[i].member(sample.members[i]);
            assembled.insert(assembled.end(), m.begin(), m.end());
        }
        EXPECT_EQ(sample.accuracy, accuracy(assembled, layout, batch));
    }
}

TEST(BestOfEach, RowArgmaxOracle) {
    const NetworkLayout layout{1, 2, 1};  // three subpopulations
    DEParams params;
    params.NP = 4;
    Rng rng(6);
    const auto set = init_subpopulations(decompose(layout), params, rng);
    for (int t = 0; t < 100; ++t) {
        FitnessTable table;
        table.values.assign(3, std::vector<double>(4));
        for (auto& row : table.values) {
            for (double& v : row) v = static_cast<double>(rng.index(4));
        }
        Genotype expected;
        for (std::size_t i = 0; i < 3; ++i) {
            std::size_t best = 0;
            for (std::size_t j = 1; j < 4; ++j) {
                if (table.values[i][j] > table.values[i][best]) best = j;
            }
            const auto m = set.subpops[i].member(best);
            expected.insert(expected.end(), m.begin(), m.end());
        }
        EXPECT_EQ(best_of_each(set, table), expected);
    }
}

TEST(EvolveLeccde, LedgerReplayTwoSubpopulations) {
    // SP = 2 forces a single output neuron, hence single-class data; the
    // SP = 3 layout adds a second class so that raw accuracies vary.
    for (const NetworkLayout layout : {NetworkLayout{2, 1, 1}, NetworkLayout{2, 1, 2}}) {
        const auto splits = nt::make_splits(30, 10, 10, 2, layout.n_outputs, 77);
        const std::size_t sp = layout.post_synaptic_count();
        // initialization, then 3 batches x 2 epochs with 2 FEs per member
        const std::size_t budget = 5 * 4 + 3 * 2 * sp * 2 * 4;
        FitnessLedger ledger;
        EngineOptions options = cc_options(budget, 4, 5, 10);
        options.ledger = &ledger;
        Rng rng(3);
        const auto report = evolve_leccde(layout, splits, options, rng);
        EXPECT_EQ(ledger.commits.size(), 3 * 2 * sp);
        EXPECT_EQ(report.evaluations.training, budget);
        const auto replay = nt::replay_limited_ledger(ledger, 0.2);
        EXPECT_EQ(replay.checked, ledger.steps.size() * 2 + ledger.commits.size() * 4);
        EXPECT_LE(replay.max_error, 1e-12);
        EXPECT_EQ(replay.keep_mismatches, 0u);
    }
}

TEST(EvolveLeccde, FullPassCost) {
    const auto splits = nt::make_splits(40, 10, 10, 3, 2, 5);
    const NetworkLayout layout{3, 2, 2};
    const std::size_t sp = 4, np = 5, batches = 4, init = 2 * np;
    EngineOptions options = cc_options(init + 2 * sp * np * batches, np, 2, 10);
    Rng rng(1);
    const auto report = evolve_leccde(layout, splits, options, rng);
    ASSERT_EQ(report.generations.size(), 1 + batches);
    EXPECT_EQ(report.generations.back().fes - report.generations.front().fes, 2 * sp * np * batches);
    EXPECT_EQ(report.subpop_updates.size(), sp * batches);
    EXPECT_EQ(report.evaluations.validation, 1 + sp * batches + 1);
}

TEST(EvolveLeccde, BudgetClosedForm) {
    Rng pick(8);
    for (int t = 0; t < 25; ++t) {
        const std::size_t np = 4 + pick.index(4), trial = 1 + pick.index(3);
        const std::size_t budget = trial * np + pick.index(200);
        const auto splits = nt::make_splits(30, 8, 8, 2, 2, 60 + static_cast<std::uint64_t>(t));
        Rng rng(static_cast<std::uint64_t>(t));
        const auto report = evolve_leccde({2, 2, 2}, splits, cc_options(budget, np, trial, 7), rng);
        const std::size_t init = trial * np;
        EXPECT_EQ(report.evaluations.training, init + 2 * ((budget - init) / 2));
    }
}

TEST(EvolveCcde, BudgetAndMonotonicity) {
    Rng pick(10);
    for (int t = 0; t < 25; ++t) {
        const std::size_t np = 4 + pick.index(4), trial = 1 + pick.index(3);
        const std::size_t budget = trial * np + pick.index(200);
        const auto splits = nt::make_splits(30, 8, 8, 3, 2, 90 + static_cast<std::uint64_t>(t));
        Rng rng(static_cast<std::uint64_t>(t));
        const auto report = evolve_ccde({3, 2, 2}, splits, cc_options(budget, np, trial, 0), rng);
        EXPECT_EQ(report.evaluations.training, budget);
        for (std::size_t g = 1; g < report.generations.size(); ++g) {
            EXPECT_GE(report.generations[g].best_fitness, report.generations[g - 1].best_fitness);
        }
        for (std::size_t u = 1; u < report.subpop_updates.size(); ++u) {
            EXPECT_GE(report.subpop_updates[u].best_validation, report.subpop_updates[u - 1].best_validation);
        }
    }
}

TEST(EvolveCcde, NoReevaluationOfTargets) {
    const auto splits = nt::make_splits(30, 8, 8, 3, 2, 1);
    FitnessLedger ledger;
    EngineOptions options = cc_options(5 * 4 + 4 * 4 * 3, 4, 5, 0);
    options.ledger = &ledger;
    Rng rng(2);
    evolve_ccde({3, 2, 2}, splits, options, rng);
    auto table = ledger.initial_fitness;
    std::size_t s = 0;
    for (const auto& commit : ledger.commits) {
        for (; s < ledger.steps.size() && ledger.steps[s].generation == commit.generation &&
               ledger.steps[s].subpop == commit.subpop;
             ++s) {
            const auto& step = ledger.steps[s];
            EXPECT_EQ(step.raw_target, table[commit.subpop][step.member]);
            EXPECT_EQ(step.kept_trial, step.raw_trial > step.raw_target);
        }
        table[commit.subpop] = commit.fitness;
    }
    EXPECT_EQ(s, ledger.steps.size());
}

TEST(Coevolution, ParallelEvaluationIsDeterministic) {
    const auto splits = nt::make_splits(60, 15, 15, 4, 3, 3);
    for (auto engine : {evolve_ccde, evolve_leccde}) {
        EngineOptions serial = cc_options(400, 6, 3, 20);
        EngineOptions parallel = serial;
        parallel.threads = 4;
        Rng a(21), b(21);
        EXPECT_EQ(report_to_json(engine({4, 3, 3}, splits, serial, a), false),
                  report_to_json(engine({4, 3, 3}, splits, parallel, b), false));
    }
}
