#pragma once

// Test-only helpers: datasets and a brute-force reference that shares no code
// with the library's evaluation or enumeration paths.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "gibbsnet/data.hpp"
#include "gibbsnet/network.hpp"
#include "gibbsnet/random.hpp"

namespace testsupport {

using gibbsnet::Activation;
using gibbsnet::Architecture;
using gibbsnet::LabeledPoint;
using gibbsnet::TrainingSet;

inline Architecture single_neuron(std::size_t dim, const char* id = "single") {
    return Architecture{id, dim, {1}, Activation::Hard};
}

inline Architecture double_layer(std::size_t dim, std::size_t hidden, const char* id = "double") {
    return Architecture{id, dim, {hidden, 1}, Activation::Hard};
}

/// n points uniform in [0,1]^2, label 1 iff x1 >= cut.
inline TrainingSet half_space(std::size_t n, std::uint64_t seed, double cut = 0.3) {
    gibbsnet::Substream rng({seed, 0}, gibbsnet::StreamPurpose::Aux);
    std::vector<LabeledPoint> pts;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = rng.uniform01();
        const double b = rng.uniform01();
        pts.push_back({{a, b}, a - cut >= 0.0 ? 1 : 0});
    }
    return TrainingSet(std::move(pts));
}

inline TrainingSet xor_set() {
    return TrainingSet({{{0, 0}, 0}, {{0, 1}, 1}, {{1, 0}, 1}, {{1, 1}, 0}});
}

/// Layered hard network over a flat parameter vector laid out neuron by
/// neuron as (weights..., threshold), evaluated without the library.
inline double reference_eval(const Architecture& arch, const std::vector<double>& flat, const std::vector<double>& x) {
    std::vector<double> in = x;
    std::size_t pos = 0;
    for (std::size_t width : arch.layers) {
        std::vector<double> outv;
        for (std::size_t j = 0; j < width; ++j) {
            // double accumulation in input order: hyperplane ties must resolve as in the library
            double z = 0;
            for (double v : in) z += flat[pos++] * v;
            const double arg = z - flat[pos++];
            outv.push_back(arch.activation == Activation::Hard ? (arg >= 0 ? 1.0 : 0.0) : 1.0 / (1.0 + std::exp(-arg)));
        }
        in = outv;
    }
    return in[0];
}

/// Calls visit(flat) for every assignment of grid values to arch's parameters, recursively.
inline void for_each_assignment(const Architecture& arch, const std::vector<double>& grid,
                                const std::function<void(const std::vector<double>&)>& visit) {
    std::vector<double> flat(arch.param_count());
    std::function<void(std::size_t)> rec = [&](std::size_t slot) {
        if (slot == flat.size()) {
            visit(flat);
            return;
        }
        for (double v : grid) {
            flat[slot] = v;
            rec(slot + 1);
        }
    };
    rec(0);
}

inline std::size_t reference_errors(const Architecture& arch, const std::vector<double>& flat, const TrainingSet& ts) {
    std::size_t m = 0;
    for (const auto& p : ts) m += (reference_eval(arch, flat, p.x) >= 0.5 ? 1 : 0) != p.label;
    return m;
}

/// Brute-force Gibbs average with long double accumulation. beta = inf keeps only minimum-m assignments.
inline double reference_gibbs_average(const Architecture& arch, const std::vector<double>& grid, const TrainingSet& ts,
                                      double beta, const std::vector<double>& x) {
    struct Item {
        std::size_t m;
        double f;
    };
    std::vector<Item> items;
    for_each_assignment(arch, grid, [&](const std::vector<double>& flat) {
        items.push_back({reference_errors(arch, flat, ts), reference_eval(arch, flat, x)});
    });
    std::size_t lowest = std::numeric_limits<std::size_t>::max();
    for (const auto& it : items) lowest = std::min(lowest, it.m);
    long double num = 0, den = 0;
    for (const auto& it : items) {
        long double w;
        if (std::isinf(beta)) {
            w = it.m == lowest ? 1.0L : 0.0L;
        } else {
            w = std::exp(-static_cast<long double>(beta) * static_cast<long double>(it.m - lowest));
        }
        num += w * it.f;
        den += w;
    }
    return static_cast<double>(num / den);
}

/// Flat layout of library params, matching reference_eval.
inline std::vector<double> flatten(const gibbsnet::NetworkParams& p) {
    std::vector<double> flat;
    for (std::size_t n = 0; n < p.weights.size(); ++n) {
        flat.insert(flat.end(), p.weights[n].begin(), p.weights[n].end());
        flat.push_back(p.thresholds[n]);
    }
    return flat;
}

}  // namespace testsupport
