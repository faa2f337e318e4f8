#include "gibbsnet/network.hpp"

#include <cmath>
#include <numeric>

#include "gibbsnet/errors.hpp"

namespace gibbsnet {

std::string_view to_string(Activation a) {
    switch (a) {
    case Activation::Hard:
        return "hard";
    case Activation::Smooth:
        return "smooth";
    }
    return "hard";
}

Activation activation_from_string(std::string_view s) {
    if (s == "hard") return Activation::Hard;
    if (s == "smooth") return Activation::Smooth;
    throw ParameterError("unknown activation '" + std::string(s) + "' (expected hard or smooth)");
}

double activate(Activation a, double z) {
    if (a == Activation::Hard) return z >= 0.0 ? 1.0 : 0.0;
    return 1.0 / (1.0 + std::exp(-z));
}

void Architecture::validate() const {
    if (id.empty()) throw ParameterError("architecture id must not be empty");
    if (input_dim == 0) throw ParameterError("architecture '" + id + "': input_dim must be positive");
    if (layers.empty()) throw ParameterError("architecture '" + id + "': needs at least one layer");
    for (std::size_t w : layers) {
        if (w == 0) throw ParameterError("architecture '" + id + "': layer widths must be positive");
    }
    if (layers.back() != 1) {
        throw ParameterError("architecture '" + id + "': output layer width must be 1");
    }
}

std::size_t Architecture::neuron_count() const {
    return std::accumulate(layers.begin(), layers.end(), std::size_t{0});
}

std::size_t Architecture::fan_in(std::size_t layer) const {
    return layer == 0 ? input_dim : layers[layer - 1];
}

std::size_t Architecture::param_count() const {
    std::size_t total = 0;
    for (std::size_t l = 0; l < layers.size(); ++l) total += (fan_in(l) + 1) * layers[l];
    return total;
}

void NetworkParams::validate_for(const Architecture& arch) const {
    if (architecture_id != arch.id) {
        throw DimensionError("params belong to architecture '" + architecture_id + "', not '" +
                             arch.id + "'");
    }
    const std::size_t neurons = arch.neuron_count();
    if (weights.size() != neurons || thresholds.size() != neurons) {
        throw DimensionError("architecture '" + arch.id + "' has " + std::to_string(neurons) +
                             " neurons but params hold " + std::to_string(weights.size()) +
                             " weight vectors and " + std::to_string(thresholds.size()) +
                             " thresholds");
    }
    std::size_t n = 0;
    for (std::size_t l = 0; l < arch.layers.size(); ++l) {
        for (std::size_t j = 0; j < arch.layers[l]; ++j, ++n) {
            if (weights[n].size() != arch.fan_in(l)) {
                throw DimensionError("neuron " + std::to_string(n) + " of '" + arch.id +
                                     "' expects " + std::to_string(arch.fan_in(l)) + " weights");
            }
            for (double w : weights[n]) {
                if (!std::isfinite(w)) throw DomainError("non-finite weight in neuron " + std::to_string(n));
            }
            if (!std::isfinite(thresholds[n])) {
                throw DomainError("non-finite threshold in neuron " + std::to_string(n));
            }
        }
    }
}

double eval_neuron(std::span<const double> weights, double threshold,
                   std::span<const double> inputs, Activation activation) {
    if (weights.size() != inputs.size()) {
        throw DimensionError("neuron has " + std::to_string(weights.size()) + " weights but got " +
                             std::to_string(inputs.size()) + " inputs");
    }
    if (!std::isfinite(threshold)) throw DomainError("non-finite threshold");
    double z = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (!std::isfinite(weights[i]) || !std::isfinite(inputs[i])) {
            throw DomainError("non-finite neuron weight or input");
        }
        z += weights[i] * inputs[i];
    }
    return activate(activation, z - threshold);
}

namespace {

void check_input(const NetworkParams& params, const Architecture& arch, std::span<const double> x) {
    if (x.size() != arch.input_dim) {
        throw DimensionError("architecture '" + arch.id + "' takes " + std::to_string(arch.input_dim) +
                             " inputs, got " + std::to_string(x.size()));
    }
    if (params.weights.size() != arch.neuron_count() ||
        params.thresholds.size() != arch.neuron_count()) {
        throw DimensionError("params do not match architecture '" + arch.id + "'");
    }
}

}  // namespace

double eval_network(const NetworkParams& params, const Architecture& arch,
                    std::span<const double> x) {
    check_input(params, arch, x);
    std::vector<double> current(x.begin(), x.end());
    std::vector<double> next;
    std::size_t n = 0;
    for (std::size_t width : arch.layers) {
        next.resize(width);
        for (std::size_t j = 0; j < width; ++j, ++n) {
            next[j] = eval_neuron(params.weights[n], params.thresholds[n], current, arch.activation);
        }
        current.swap(next);
    }
    return current.front();
}

std::vector<double> eval_first_layer(const NetworkParams& params, const Architecture& arch,
                                     std::span<const double> x) {
    check_input(params, arch, x);
    std::vector<double> out(arch.layers.front());
    for (std::size_t j = 0; j < out.size(); ++j) {
        out[j] = eval_neuron(params.weights[j], params.thresholds[j], x, arch.activation);
    }
    return out;
}

}  // namespace gibbsnet
