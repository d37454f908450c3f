#pragma once

#include "neuroevo/ffnet.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace neuroevo {

/// Tabular labeled data, features stored row-major.
struct LabeledDataset {
    std::size_t n_features = 0;
    std::vector<double> features;
    std::vector<std::size_t> labels;
    std::vector<std::string> class_names;

    std::size_t size() const { return labels.size(); }
    std::size_t n_classes() const { return class_names.size(); }
    double feature(std::size_t row, std::size_t column) const { return features[row * n_features + column]; }

    /// Rows in the given order; keeps the full label vocabulary.
    LabeledDataset subset(const std::vector<std::size_t>& rows) const;
};

/// Column roles of a delimited text file.
struct TableSchema {
    enum class Delimiter { Comma, Whitespace };
    Delimiter delimiter = Delimiter::Comma;
    bool header = false;
    /// Label column position; negative values count from the end (-1 = last).
    long label_column = -1;
    /// Columns dropped before parsing features (e.g. record identifiers).
    std::vector<std::size_t> ignore_columns;
};

/// Parses delimited text. Labels map to indices in first-appearance order.
/// Errors name the 1-based file row and column of the offending cell.
LabeledDataset parse_table(std::istream& in, const TableSchema& schema);
LabeledDataset load_table(const std::string& path, const TableSchema& schema);

struct SplitSpec {
    double train_ratio = 0.7;
    double valid_ratio = 0.15;
    double test_ratio = 0.15;
    std::uint64_t seed = 1;

    void validate() const;
};

struct SplitIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> valid;
    std::vector<std::size_t> test;
};

/// Seeded permutation cut at floor(n * train) and floor(n * (train + valid)).
SplitIndices split_indices(std::size_t n, const SplitSpec& spec);

struct DatasetSplits {
    LabeledDataset train;
    LabeledDataset valid;
    LabeledDataset test;
    SplitIndices indices;
};

DatasetSplits split(const LabeledDataset& dataset, const SplitSpec& spec);

/// Canonical JSON manifest (seed, ratios, per-split index lists).
std::string split_manifest_json(const SplitIndices& indices, const SplitSpec& spec);

/// Per-feature z-scoring with statistics from the training split.
struct Standardizer {
    std::vector<double> mean;
    std::vector<double> stddev;  // population standard deviation

    /// (x - mean) / stddev; zero-variance features map to 0.
    LabeledDataset apply(const LabeledDataset& data) const;
    /// x * stddev + mean; zero-variance features map back to the mean.
    LabeledDataset invert(const LabeledDataset& data) const;
};

Standardizer fit_standardizer(const LabeledDataset& train);

inline LabeledDataset apply_standardizer(const Standardizer& standardizer, const LabeledDataset& data) {
    return standardizer.apply(data);
}

EvalSet to_eval_set(const LabeledDataset& data);

}  // namespace neuroevo
