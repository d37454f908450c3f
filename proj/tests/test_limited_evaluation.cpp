#include "neuroevo/error.hpp"
#include "neuroevo/limited_evaluation.hpp"
#include "neuroevo/rng.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

using namespace neuroevo;

TEST(PartitionBatches, WbcTrainingSizes) {
    Rng rng(1);
    const auto schedule = partition_batches(398, 100, rng);
    ASSERT_EQ(schedule.batches.size(), 4u);
    EXPECT_EQ(schedule.batches[0].instance_indices.size(), 100u);
    EXPECT_EQ(schedule.batches[1].instance_indices.size(), 100u);
    EXPECT_EQ(schedule.batches[2].instance_indices.size(), 100u);
    EXPECT_EQ(schedule.batches[3].instance_indices.size(), 98u);
}

TEST(PartitionBatches, DisjointCoverOfTrainingSet) {
    Rng pick(4);
    for (int t = 0; t < 300; ++t) {
        const std::size_t n = 1 + pick.index(500);
        const std::size_t b = 1 + pick.index(n);
        Rng rng(static_cast<std::uint64_t>(t));
        const auto schedule = partition_batches(n, b, rng);
        EXPECT_EQ(schedule.batches.size(), (n + b - 1) / b);
        std::vector<std::size_t> all;
        for (std::size_t k = 0; k < schedule.batches.size(); ++k) {
            const auto& idx = schedule.batches[k].instance_indices;
            if (k + 1 < schedule.batches.size()) EXPECT_EQ(idx.size(), b);
            all.insert(all.end(), idx.begin(), idx.end());
        }
        std::ranges::sort(all);
        std::vector<std::size_t> expected(n);
        std::iota(expected.begin(), expected.end(), 0);
        EXPECT_EQ(all, expected);
    }
}

TEST(PartitionBatches, SeededAndVarying) {
    Rng a(7), b(7);
    const auto first = partition_batches(50, 10, a);
    EXPECT_EQ(first.batches[0].instance_indices, partition_batches(50, 10, b).batches[0].instance_indices);
    EXPECT_NE(first.batches[0].instance_indices, partition_batches(50, 10, a).batches[0].instance_indices);
}

TEST(PartitionBatches, InvalidSizes) {
    Rng rng(1);
    EXPECT_THROW(partition_batches(10, 0, rng), Error);
    EXPECT_THROW(partition_batches(10, 11, rng), Error);
    EXPECT_THROW(partition_batches(0, 1, rng), Error);
}

TEST(Inheritance, WorkedExamples) {
    EXPECT_NEAR(inherit_asexual(0.5, 0.2, 0.9), 1.3, 1e-15);
    EXPECT_NEAR(inherit_sexual(0.6, 0.4, 0.2, 0.58), 0.98, 1e-15);
    EXPECT_DOUBLE_EQ(mutant_fitness(0.3, 0.6, 0.9), 0.6);
}

TEST(Inheritance, DecayOneForgetsParents) {
    EXPECT_EQ(inherit_asexual(123.0, 1.0, 0.25), 0.25);
    EXPECT_EQ(inherit_sexual(5.0, 7.0, 1.0, 0.5), 0.5);
}

TEST(Inheritance, GeometricBound) {
    // repeated perfect batches converge to 1 / d from below
    for (double d : {0.1, 0.2, 0.5, 0.9}) {
        double f = 0.0;
        for (int k = 0; k < 2000; ++k) {
            f = inherit_asexual(f, d, 1.0);
            ASSERT_LE(f, 1.0 / d + 1e-12);
        }
        EXPECT_NEAR(f, 1.0 / d, 1e-9);
    }
}

TEST(Inheritance, RandomSequencesStayInGeometricCap) {
    Rng rng(19);
    for (int t = 0; t < 1000; ++t) {
        const double d = 0.05 + 0.95 * rng.uniform();
        double f = rng.uniform();
        for (int k = 0; k < 200; ++k) {
            f = rng.uniform() < 0.5 ? inherit_asexual(f, d, rng.uniform())
                                    : inherit_sexual(f, rng.uniform() * (1.0 / d), d, rng.uniform());
            ASSERT_GE(f, 0.0);
            ASSERT_LE(f, 1.0 / d + 1e-12);
        }
    }
}

TEST(Inheritance, EqualParentsMatchAsexual) {
    Rng rng(3);
    for (int t = 0; t < 1000; ++t) {
        const double p = rng.uniform(0.0, 5.0), d = rng.uniform(), f = rng.uniform();
        EXPECT_DOUBLE_EQ(inherit_sexual(p, p, d, f), inherit_asexual(p, d, f));
    }
}

TEST(Inheritance, MonotoneInEachArgument) {
    Rng rng(4);
    for (int t = 0; t < 1000; ++t) {
        const double p = rng.uniform(0.0, 5.0), q = rng.uniform(0.0, 5.0), d = rng.uniform(0.0, 0.99);
        const double f = rng.uniform(), step = rng.uniform(1e-6, 1.0);
        EXPECT_GE(inherit_asexual(p + step, d, f), inherit_asexual(p, d, f));
        EXPECT_GE(inherit_asexual(p, d, f + step), inherit_asexual(p, d, f));
        EXPECT_GE(inherit_sexual(p + step, q, d, f), inherit_sexual(p, q, d, f));
        EXPECT_GE(inherit_sexual(p, q + step, d, f), inherit_sexual(p, q, d, f));
    }
}

TEST(Inheritance, ParamsValidated) {
    EXPECT_NO_THROW(InheritanceParams{0.2}.validate());
    EXPECT_NO_THROW(InheritanceParams{1.0}.validate());
    EXPECT_NO_THROW(InheritanceParams{0.0}.validate());
    EXPECT_THROW(InheritanceParams{-0.1}.validate(), Error);
    EXPECT_THROW(InheritanceParams{1.5}.validate(), Error);
}
