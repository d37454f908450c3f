#include "neuroevo/ffnet.hpp"

#include "neuroevo/error.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace neuroevo {

void NetworkLayout::validate() const {
    if (n_inputs == 0 || n_hidden == 0 || n_outputs == 0) {
        throw Error(ErrorCategory::InvalidArgument,
                    "network layout dimensions must be positive (got " + std::to_string(n_inputs) + ", " +
                        std::to_string(n_hidden) + ", " + std::to_string(n_outputs) + ")");
    }
}

std::size_t NetworkLayout::block_offset(std::size_t neuron) const {
    if (neuron < n_hidden) return neuron * (n_inputs + 1);
    return n_hidden * (n_inputs + 1) + (neuron - n_hidden) * (n_hidden + 1);
}

std::size_t NetworkLayout::block_length(std::size_t neuron) const {
    return neuron < n_hidden ? n_inputs + 1 : n_hidden + 1;
}

std::size_t genotype_len(const NetworkLayout& layout) {
    return (layout.n_inputs + 1) * layout.n_hidden + (layout.n_hidden + 1) * layout.n_outputs;
}

double activation(double x) {
    const double magnitude = std::fabs(x);
    // exp(-60) < 1e-26, below double resolution near 1
    const double value = magnitude > 30.0 ? 1.0 : 2.0 / (1.0 + std::exp(-2.0 * magnitude)) - 1.0;
    return std::copysign(value, x);
}

namespace {

void check_genotype(std::span<const double> genotype, const NetworkLayout& layout) {
    layout.validate();
    if (genotype.size() != genotype_len(layout)) throw_dimension_mismatch("genotype", genotype_len(layout), genotype.size());
}

// Evaluates one neuron over all instances. `column(k)` yields the k-th
// pre-synaptic activation for every instance. The per-instance sum order is
// fan-in weights in index order, then the bias.
template <typename ColumnFn>
void neuron_over_instances(std::span<const double> block, std::size_t fan_in, std::size_t n, ColumnFn column,
                           double* out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = 0.0;
    for (std::size_t k = 0; k < fan_in; ++k) {
        const double w = block[k];
        const double* col = column(k);
        for (std::size_t i = 0; i < n; ++i) out[i] += w * col[i];
    }
    const double bias = block[fan_in];
    for (std::size_t i = 0; i < n; ++i) out[i] = activation(out[i] + bias);
}

void hidden_layer(std::span<const double> genotype, const NetworkLayout& layout, const EvalSet& set,
                  std::vector<double>& hidden) {
    const std::size_t n = set.size();
    hidden.assign(layout.n_hidden * n, 0.0);
    for (std::size_t h = 0; h < layout.n_hidden; ++h) {
        neuron_over_instances(genotype.subspan(layout.block_offset(h), layout.block_length(h)), layout.n_inputs, n,
                              [&](std::size_t k) { return set.feature_column(k).data(); }, hidden.data() + h * n);
    }
}

void output_neuron(std::span<const double> block, const NetworkLayout& layout, std::size_t n,
                   const std::vector<double>& hidden, double* out) {
    neuron_over_instances(block, layout.n_hidden, n, [&](std::size_t k) { return hidden.data() + k * n; }, out);
}

std::size_t count_correct(const std::vector<double>& outputs, std::size_t n_outputs, const EvalSet& set) {
    const std::size_t n = set.size();
    std::size_t correct = 0;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t best = 0;
        double best_value = outputs[i];
        for (std::size_t c = 1; c < n_outputs; ++c) {
            const double v = outputs[c * n + i];
            if (v > best_value) {
                best_value = v;
                best = c;
            }
        }
        if (best == set.label(i)) ++correct;
    }
    return correct;
}

}  // namespace

std::vector<double> forward(std::span<const double> genotype, const NetworkLayout& layout,
                            std::span<const double> input) {
    check_genotype(genotype, layout);
    if (input.size() != layout.n_inputs) throw_dimension_mismatch("input", layout.n_inputs, input.size());

    std::vector<double> hidden(layout.n_hidden);
    for (std::size_t h = 0; h < layout.n_hidden; ++h) {
        const auto block = genotype.subspan(layout.block_offset(h), layout.block_length(h));
        double sum = 0.0;
        for (std::size_t k = 0; k < layout.n_inputs; ++k) sum += block[k] * input[k];
        hidden[h] = activation(sum + block[layout.n_inputs]);
    }
    std::vector<double> outputs(layout.n_outputs);
    for (std::size_t c = 0; c < layout.n_outputs; ++c) {
        const auto block = genotype.subspan(layout.block_offset(layout.n_hidden + c), layout.n_hidden + 1);
        double sum = 0.0;
        for (std::size_t k = 0; k < layout.n_hidden; ++k) sum += block[k] * hidden[k];
        outputs[c] = activation(sum + block[layout.n_hidden]);
    }
    return outputs;
}

std::size_t classify(std::span<const double> outputs) {
    if (outputs.empty()) throw Error(ErrorCategory::InvalidArgument, "cannot classify an empty output vector");
    std::size_t best = 0;
    for (std::size_t c = 1; c < outputs.size(); ++c) {
        if (outputs[c] > outputs[best]) best = c;
    }
    return best;
}

EvalSet::EvalSet(std::span<const double> rows, std::span<const std::size_t> labels, std::size_t n_features)
    : n_features_(n_features), labels_(labels.begin(), labels.end()) {
    const std::size_t n = labels.size();
    if (rows.size() != n * n_features) throw_dimension_mismatch("feature matrix", n * n_features, rows.size());
    columns_.resize(rows.size());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t f = 0; f < n_features; ++f) columns_[f * n + i] = rows[i * n_features + f];
    }
}

std::vector<double> EvalSet::row(std::size_t instance) const {
    std::vector<double> values(n_features_);
    for (std::size_t f = 0; f < n_features_; ++f) values[f] = feature(instance, f);
    return values;
}

EvalSet EvalSet::gather(std::span<const std::size_t> indices) const {
    EvalSet subset;
    subset.n_features_ = n_features_;
    const std::size_t n = indices.size();
    subset.labels_.resize(n);
    subset.columns_.resize(n * n_features_);
    for (std::size_t i = 0; i < n; ++i) {
        if (indices[i] >= size()) {
            throw Error(ErrorCategory::InvalidArgument, "instance index " + std::to_string(indices[i]) +
                                                            " out of range for set of size " + std::to_string(size()));
        }
        subset.labels_[i] = labels_[indices[i]];
    }
    for (std::size_t f = 0; f < n_features_; ++f) {
        const double* src = columns_.data() + f * size();
        double* dst = subset.columns_.data() + f * n;
        for (std::size_t i = 0; i < n; ++i) dst[i] = src[indices[i]];
    }
    return subset;
}

double accuracy(std::span<const double> genotype, const NetworkLayout& layout, const EvalSet& instances) {
    check_genotype(genotype, layout);
    if (instances.empty()) throw Error(ErrorCategory::InvalidArgument, "accuracy of an empty instance set is undefined");
    if (instances.n_features() != layout.n_inputs) {
        throw_dimension_mismatch("instance features", layout.n_inputs, instances.n_features());
    }
    const std::size_t n = instances.size();
    std::vector<double> hidden;
    hidden_layer(genotype, layout, instances, hidden);
    std::vector<double> outputs(layout.n_outputs * n);
    for (std::size_t c = 0; c < layout.n_outputs; ++c) {
        output_neuron(genotype.subspan(layout.block_offset(layout.n_hidden + c), layout.n_hidden + 1), layout, n,
                      hidden, outputs.data() + c * n);
    }
    return static_cast<double>(count_correct(outputs, layout.n_outputs, instances)) / static_cast<double>(n);
}

SubstitutionEvaluator::SubstitutionEvaluator(const NetworkLayout& layout, const EvalSet& instances,
                                             std::span<const double> base_genotype)
    : layout_(layout), instances_(instances), base_(base_genotype.begin(), base_genotype.end()) {
    check_genotype(base_, layout_);
    if (instances_.empty()) throw Error(ErrorCategory::InvalidArgument, "accuracy of an empty instance set is undefined");
    if (instances_.n_features() != layout_.n_inputs) {
        throw_dimension_mismatch("instance features", layout_.n_inputs, instances_.n_features());
    }
    const std::size_t n = instances_.size();
    hidden_layer(base_, layout_, instances_, hidden_);
    outputs_.assign(layout_.n_outputs * n, 0.0);
    for (std::size_t c = 0; c < layout_.n_outputs; ++c) {
        output_neuron(std::span<const double>(base_).subspan(layout_.block_offset(layout_.n_hidden + c),
                                                              layout_.n_hidden + 1),
                      layout_, n, hidden_, outputs_.data() + c * n);
    }
}

double SubstitutionEvaluator::base_accuracy() const {
    return static_cast<double>(count_correct(outputs_, layout_.n_outputs, instances_)) /
           static_cast<double>(instances_.size());
}

double SubstitutionEvaluator::accuracy_with(std::size_t neuron, std::span<const double> block) const {
    if (neuron >= layout_.post_synaptic_count()) {
        throw Error(ErrorCategory::InvalidArgument, "neuron index " + std::to_string(neuron) + " out of range");
    }
    if (block.size() != layout_.block_length(neuron)) {
        throw_dimension_mismatch("block", layout_.block_length(neuron), block.size());
    }
    const std::size_t n = instances_.size();
    const std::span<const double> base(base_);

    if (neuron < layout_.n_hidden) {
        std::vector<double> replaced(n);
        neuron_over_instances(block, layout_.n_inputs, n,
                              [&](std::size_t k) { return instances_.feature_column(k).data(); }, replaced.data());
        std::vector<double> outputs(layout_.n_outputs * n);
        for (std::size_t c = 0; c < layout_.n_outputs; ++c) {
            neuron_over_instances(base.subspan(layout_.block_offset(layout_.n_hidden + c), layout_.n_hidden + 1),
                                  layout_.n_hidden, n,
                                  [&](std::size_t k) { return k == neuron ? replaced.data() : hidden_.data() + k * n; },
                                  outputs.data() + c * n);
        }
        return static_cast<double>(count_correct(outputs, layout_.n_outputs, instances_)) / static_cast<double>(n);
    }

    const std::size_t c = neuron - layout_.n_hidden;
    std::vector<double> replaced(n);
    neuron_over_instances(block, layout_.n_hidden, n, [&](std::size_t k) { return hidden_.data() + k * n; },
                          replaced.data());
    std::size_t correct = 0;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t best = 0;
        double best_value = c == 0 ? replaced[i] : outputs_[i];
        for (std::size_t o = 1; o < layout_.n_outputs; ++o) {
            const double v = o == c ? replaced[i] : outputs_[o * n + i];
            if (v > best_value) {
                best_value = v;
                best = o;
            }
        }
        if (best == instances_.label(i)) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(n);
}

void SubstitutionEvaluator::commit(std::size_t neuron, std::span<const double> block) {
    if (neuron >= layout_.post_synaptic_count()) {
        throw Error(ErrorCategory::InvalidArgument, "neuron index " + std::to_string(neuron) + " out of range");
    }
    if (block.size() != layout_.block_length(neuron)) {
        throw_dimension_mismatch("block", layout_.block_length(neuron), block.size());
    }
    std::copy(block.begin(), block.end(), base_.begin() + static_cast<std::ptrdiff_t>(layout_.block_offset(neuron)));
    const std::size_t n = instances_.size();
    const std::span<const double> base(base_);
    if (neuron < layout_.n_hidden) {
        neuron_over_instances(block, layout_.n_inputs, n,
                              [&](std::size_t k) { return instances_.feature_column(k).data(); },
                              hidden_.data() + neuron * n);
        for (std::size_t c = 0; c < layout_.n_outputs; ++c) {
            output_neuron(base.subspan(layout_.block_offset(layout_.n_hidden + c), layout_.n_hidden + 1), layout_, n,
                          hidden_, outputs_.data() + c * n);
        }
    } else {
        const std::size_t c = neuron - layout_.n_hidden;
        output_neuron(block, layout_, n, hidden_, outputs_.data() + c * n);
    }
}

void write_genotype(std::ostream& out, const NetworkLayout& layout, std::span<const double> genotype) {
    check_genotype(genotype, layout);
    out << "layout " << layout.n_inputs << ' ' << layout.n_hidden << ' ' << layout.n_outputs << '\n';
    char buffer[64];
    for (double w : genotype) {
        const auto result = std::to_chars(buffer, buffer + sizeof(buffer), w);
        out.write(buffer, result.ptr - buffer);
        out.put('\n');
    }
}

LoadedGenotype read_genotype(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCategory::Data, "genotype stream is empty");
    std::istringstream header(line);
    std::string tag;
    LoadedGenotype loaded;
    if (!(header >> tag >> loaded.layout.n_inputs >> loaded.layout.n_hidden >> loaded.layout.n_outputs) ||
        tag != "layout") {
        throw Error(ErrorCategory::Data, "genotype header must read `layout n_inputs n_hidden n_outputs`, got: " + line);
    }
    loaded.layout.validate();
    const std::size_t expected = genotype_len(loaded.layout);
    loaded.weights.reserve(expected);
    std::string token;
    while (in >> token) {
        double value = 0.0;
        const auto result = std::from_chars(token.data(), token.data() + token.size(), value);
        if (result.ec != std::errc{} || result.ptr != token.data() + token.size() || !std::isfinite(value)) {
            throw Error(ErrorCategory::Data, "genotype value " + std::to_string(loaded.weights.size() + 1) +
                                                 " is not a finite real: " + token);
        }
        loaded.weights.push_back(value);
    }
    if (loaded.weights.size() != expected) throw_dimension_mismatch("genotype", expected, loaded.weights.size());
    return loaded;
}

}  // namespace neuroevo
