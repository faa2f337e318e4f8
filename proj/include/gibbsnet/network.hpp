#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gibbsnet {

enum class Activation {
    Hard,    // step: 1 for z >= 0, else 0
    Smooth,  // logistic 1 / (1 + exp(-z))
};

std::string_view to_string(Activation a);
Activation activation_from_string(std::string_view s);

double activate(Activation a, double z);

/// Fully connected layered network shape.
///
/// `layers` lists the widths of the neuron layers (hidden layers first, the
/// output layer last), so `{1}` is a single neuron and `{K, 1}` is the
/// double-layer network with K hidden neurons. Inputs are not a layer.
struct Architecture {
    std::string id;
    std::size_t input_dim = 0;
    std::vector<std::size_t> layers;
    Activation activation = Activation::Hard;

    /// Throws ParameterError unless the shape is well formed.
    void validate() const;

    std::size_t neuron_count() const;
    std::size_t param_count() const;
    /// Number of inputs feeding each neuron of `layer`.
    std::size_t fan_in(std::size_t layer) const;

    bool operator==(const Architecture&) const = default;
};

/// Weights and thresholds for one network, neurons stored layer by layer.
struct NetworkParams {
    std::string architecture_id;
    std::vector<std::vector<double>> weights;
    std::vector<double> thresholds;

    /// Throws DimensionError / DomainError if these params cannot drive `arch`.
    void validate_for(const Architecture& arch) const;

    bool operator==(const NetworkParams&) const = default;
};

double eval_neuron(std::span<const double> weights, double threshold,
                   std::span<const double> inputs, Activation activation);

double eval_network(const NetworkParams& params, const Architecture& arch,
                    std::span<const double> x);

/// Outputs of the first layer (the hidden code of a double-layer network).
std::vector<double> eval_first_layer(const NetworkParams& params, const Architecture& arch,
                                     std::span<const double> x);

/// Decision rule shared by error counting and prediction: 1 iff value >= 0.5.
inline int classify(double value) { return value >= 0.5 ? 1 : 0; }

}  // namespace gibbsnet
