#include "neuroevo/dataset.hpp"

#include "neuroevo/error.hpp"
#include "neuroevo/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace neuroevo {

namespace {

std::string trim(const std::string& text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = text.find_last_not_of(" \t\r\n");
    return text.substr(first, last - first + 1);
}

std::vector<std::string> split_cells(const std::string& line, TableSchema::Delimiter delimiter) {
    std::vector<std::string> cells;
    if (delimiter == TableSchema::Delimiter::Whitespace) {
        std::istringstream stream(line);
        std::string cell;
        while (stream >> cell) cells.push_back(cell);
        return cells;
    }
    std::string cell;
    std::istringstream stream(line);
    while (std::getline(stream, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

}  // namespace

LabeledDataset LabeledDataset::subset(const std::vector<std::size_t>& rows) const {
    LabeledDataset out;
    out.n_features = n_features;
    out.class_names = class_names;
    out.features.reserve(rows.size() * n_features);
    for (std::size_t row : rows) {
        out.features.insert(out.features.end(), features.begin() + static_cast<std::ptrdiff_t>(row * n_features),
                            features.begin() + static_cast<std::ptrdiff_t>((row + 1) * n_features));
        out.labels.push_back(labels[row]);
    }
    return out;
}

LabeledDataset parse_table(std::istream& in, const TableSchema& schema) {
    LabeledDataset data;
    std::unordered_map<std::string, std::size_t> vocabulary;
    std::size_t expected_columns = 0;
    std::size_t label_index = 0;
    std::size_t file_row = 0;
    std::string line;
    bool header_pending = schema.header;

    while (std::getline(in, line)) {
        ++file_row;
        if (trim(line).empty()) continue;
        if (header_pending) {
            header_pending = false;
            continue;
        }
        const auto cells = split_cells(line, schema.delimiter);
        if (expected_columns == 0) {
            expected_columns = cells.size();
            const long position = schema.label_column < 0 ? static_cast<long>(cells.size()) + schema.label_column
                                                          : schema.label_column;
            if (position < 0 || position >= static_cast<long>(cells.size())) {
                throw Error(ErrorCategory::Data, "label column " + std::to_string(schema.label_column) +
                                                     " does not exist in a table with " +
                                                     std::to_string(cells.size()) + " columns");
            }
            label_index = static_cast<std::size_t>(position);
            for (std::size_t ignored : schema.ignore_columns) {
                if (ignored >= cells.size() || ignored == label_index ||
                    std::ranges::count(schema.ignore_columns, ignored) > 1) {
                    throw Error(ErrorCategory::Data, "ignored column " + std::to_string(ignored) + " is invalid");
                }
            }
            data.n_features = cells.size() - 1 - schema.ignore_columns.size();
            if (data.n_features == 0) throw Error(ErrorCategory::Data, "table has no feature columns");
        }
        if (cells.size() != expected_columns) {
            throw Error(ErrorCategory::Data, "row " + std::to_string(file_row) + " has " +
                                                 std::to_string(cells.size()) + " columns, expected " +
                                                 std::to_string(expected_columns));
        }
        for (std::size_t column = 0; column < cells.size(); ++column) {
            const std::string& cell = cells[column];
            if (column == label_index) {
                if (cell.empty()) {
                    throw Error(ErrorCategory::Data, "row " + std::to_string(file_row) + " has an empty label");
                }
                auto [it, inserted] = vocabulary.try_emplace(cell, data.class_names.size());
                if (inserted) data.class_names.push_back(cell);
                data.labels.push_back(it->second);
                continue;
            }
            if (std::ranges::find(schema.ignore_columns, column) != schema.ignore_columns.end()) continue;
            double value = 0.0;
            const auto result = std::from_chars(cell.data(), cell.data() + cell.size(), value);
            if (cell.empty() || result.ec != std::errc{} || result.ptr != cell.data() + cell.size() ||
                !std::isfinite(value)) {
                throw Error(ErrorCategory::Data, "row " + std::to_string(file_row) + ", column " +
                                                     std::to_string(column + 1) + ": cannot parse '" + cell +
                                                     "' as a finite number");
            }
            data.features.push_back(value);
        }
    }
    if (data.labels.empty()) throw Error(ErrorCategory::Data, "table contains no data rows");
    return data;
}

LabeledDataset load_table(const std::string& path, const TableSchema& schema) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCategory::Io, "cannot open dataset file: " + path);
    return parse_table(in, schema);
}

void SplitSpec::validate() const {
    if (!(train_ratio > 0.0 && valid_ratio > 0.0 && test_ratio > 0.0)) {
        throw Error(ErrorCategory::InvalidArgument, "split ratios must all be positive");
    }
    if (std::fabs(train_ratio + valid_ratio + test_ratio - 1.0) > 1e-12) {
        throw Error(ErrorCategory::InvalidArgument, "split ratios must sum to 1");
    }
}

SplitIndices split_indices(std::size_t n, const SplitSpec& spec) {
    spec.validate();
    // the epsilon keeps exact products such as 20 * 0.85 from flooring down
    const auto cut = [n](double ratio) {
        return std::min(n, static_cast<std::size_t>(std::floor(static_cast<double>(n) * ratio + 1e-9)));
    };
    const std::size_t train_end = cut(spec.train_ratio);
    const std::size_t valid_end = cut(spec.train_ratio + spec.valid_ratio);
    if (train_end == 0 || valid_end == train_end || valid_end == n) {
        throw Error(ErrorCategory::Data, "split ratios leave an empty split for " + std::to_string(n) + " instances");
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(spec.seed);
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.index(i)]);

    SplitIndices indices;
    indices.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(train_end));
    indices.valid.assign(order.begin() + static_cast<std::ptrdiff_t>(train_end),
                         order.begin() + static_cast<std::ptrdiff_t>(valid_end));
    indices.test.assign(order.begin() + static_cast<std::ptrdiff_t>(valid_end), order.end());
    return indices;
}

DatasetSplits split(const LabeledDataset& dataset, const SplitSpec& spec) {
    DatasetSplits out;
    out.indices = split_indices(dataset.size(), spec);
    out.train = dataset.subset(out.indices.train);
    out.valid = dataset.subset(out.indices.valid);
    out.test = dataset.subset(out.indices.test);
    return out;
}

std::string split_manifest_json(const SplitIndices& indices, const SplitSpec& spec) {
    nlohmann::ordered_json doc;
    doc["seed"] = spec.seed;
    doc["ratios"] = {spec.train_ratio, spec.valid_ratio, spec.test_ratio};
    doc["train"] = indices.train;
    doc["valid"] = indices.valid;
    doc["test"] = indices.test;
    return doc.dump(1) + "\n";
}

Standardizer fit_standardizer(const LabeledDataset& train) {
    if (train.size() == 0) throw Error(ErrorCategory::InvalidArgument, "cannot fit a standardizer on no data");
    const std::size_t n = train.size();
    Standardizer fitted;
    fitted.mean.assign(train.n_features, 0.0);
    fitted.stddev.assign(train.n_features, 0.0);
    for (std::size_t f = 0; f < train.n_features; ++f) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) sum += train.feature(i, f);
        const double mean = sum / static_cast<double>(n);
        double squares = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = train.feature(i, f) - mean;
            squares += d * d;
        }
        fitted.mean[f] = mean;
        fitted.stddev[f] = std::sqrt(squares / static_cast<double>(n));
    }
    return fitted;
}

LabeledDataset Standardizer::apply(const LabeledDataset& data) const {
    if (data.n_features != mean.size()) throw_dimension_mismatch("standardizer features", mean.size(), data.n_features);
    LabeledDataset out = data;
    for (std::size_t i = 0; i < data.size(); ++i) {
        for (std::size_t f = 0; f < data.n_features; ++f) {
            double& x = out.features[i * data.n_features + f];
            x = stddev[f] > 0.0 ? (x - mean[f]) / stddev[f] : 0.0;
        }
    }
    return out;
}

LabeledDataset Standardizer::invert(const LabeledDataset& data) const {
    if (data.n_features != mean.size()) throw_dimension_mismatch("standardizer features", mean.size(), data.n_features);
    LabeledDataset out = data;
    for (std::size_t i = 0; i < data.size(); ++i) {
        for (std::size_t f = 0; f < data.n_features; ++f) {
            double& x = out.features[i * data.n_features + f];
            x = x * stddev[f] + mean[f];
        }
    }
    return out;
}

EvalSet to_eval_set(const LabeledDataset& data) { return EvalSet(data.features, data.labels, data.n_features); }

}  // namespace neuroevo
