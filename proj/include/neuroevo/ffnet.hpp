#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace neuroevo {

/// Fully connected feed-forward network with a single hidden layer.
///
/// Every post-synaptic neuron (hidden neurons first, then output neurons)
/// owns one contiguous block of the genotype: its fan-in weights followed by
/// its bias weight.
struct NetworkLayout {
    std::size_t n_inputs = 0;
    std::size_t n_hidden = 0;
    std::size_t n_outputs = 0;

    /// Throws Error{InvalidArgument} if any dimension is zero.
    void validate() const;

    std::size_t post_synaptic_count() const { return n_hidden + n_outputs; }

    /// Offset and length of the block owned by post-synaptic neuron `neuron`.
    std::size_t block_offset(std::size_t neuron) const;
    std::size_t block_length(std::size_t neuron) const;

    bool operator==(const NetworkLayout&) const = default;
};

using Genotype = std::vector<double>;

std::size_t genotype_len(const NetworkLayout& layout);

/// psi(x) = 2 / (1 + exp(-2x)) - 1, saturated to +-1 for |x| > 30.
double activation(double x);

/// Output activations for a single input vector.
std::vector<double> forward(std::span<const double> genotype, const NetworkLayout& layout,
                            std::span<const double> input);

/// Argmax with lowest-index tie-break.
std::size_t classify(std::span<const double> outputs);

/// Labeled instances stored feature-major, so that one neuron can be
/// evaluated over all instances with a contiguous inner loop.
class EvalSet {
public:
    EvalSet() = default;

    /// `rows` is row-major, n_instances x n_features.
    EvalSet(std::span<const double> rows, std::span<const std::size_t> labels, std::size_t n_features);

    std::size_t size() const { return labels_.size(); }
    std::size_t n_features() const { return n_features_; }
    bool empty() const { return labels_.empty(); }

    std::span<const double> feature_column(std::size_t feature) const {
        return {columns_.data() + feature * size(), size()};
    }
    double feature(std::size_t instance, std::size_t feature) const {
        return columns_[feature * size() + instance];
    }
    std::size_t label(std::size_t instance) const { return labels_[instance]; }
    std::span<const std::size_t> labels() const { return labels_; }

    /// Row view of one instance (copied out of the column store).
    std::vector<double> row(std::size_t instance) const;

    /// Subset in the given index order.
    EvalSet gather(std::span<const std::size_t> indices) const;

private:
    std::size_t n_features_ = 0;
    std::vector<double> columns_;
    std::vector<std::size_t> labels_;
};

/// Fraction of instances whose predicted class equals the label.
double accuracy(std::span<const double> genotype, const NetworkLayout& layout, const EvalSet& instances);

/// Accuracy of a base network with one post-synaptic block substituted.
///
/// Caches the hidden and output activations of the base network over a fixed
/// instance set. Substituting a hidden block recomputes that neuron and the
/// output layer; substituting an output block recomputes one output neuron.
/// Results are bit-identical to accuracy() on the spliced genotype because
/// every neuron sum is accumulated in the same order.
class SubstitutionEvaluator {
public:
    SubstitutionEvaluator(const NetworkLayout& layout, const EvalSet& instances,
                          std::span<const double> base_genotype);

    double accuracy_with(std::size_t neuron, std::span<const double> block) const;

    /// Accuracy of the base network itself.
    double base_accuracy() const;

    /// Replaces a block of the base network and refreshes the caches.
    void commit(std::size_t neuron, std::span<const double> block);

    std::span<const double> base() const { return base_; }

private:
    const NetworkLayout layout_;
    const EvalSet& instances_;
    Genotype base_;
    std::vector<double> hidden_;   // n_hidden x n_instances
    std::vector<double> outputs_;  // n_outputs x n_instances
};

/// Text form: a header line `layout n_inputs n_hidden n_outputs`, then one
/// value per line in shortest round-trip decimal.
void write_genotype(std::ostream& out, const NetworkLayout& layout, std::span<const double> genotype);

struct LoadedGenotype {
    NetworkLayout layout;
    Genotype weights;
};

LoadedGenotype read_genotype(std::istream& in);

}  // namespace neuroevo
