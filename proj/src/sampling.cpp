#include "gibbsnet/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "gibbsnet/errors.hpp"

namespace gibbsnet {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

}  // namespace

ParamDistribution::ParamDistribution(Kind kind) : kind_(std::move(kind)) {
    std::visit(overloaded{
                   [](const NormalDist& d) {
                       if (!std::isfinite(d.mean) || !std::isfinite(d.stddev) || !(d.stddev > 0.0)) {
                           throw ParameterError("normal distribution needs finite mean and stddev > 0");
                       }
                   },
                   [](const UniformDist& d) {
                       if (!std::isfinite(d.lo) || !std::isfinite(d.hi) || !(d.lo < d.hi)) {
                           throw ParameterError("uniform distribution needs finite lo < hi");
                       }
                   },
                   [](const GridDist& d) {
                       if (d.values.empty()) throw ParameterError("grid distribution needs at least one value");
                       std::set<double> distinct;
                       for (double v : d.values) {
                           if (!std::isfinite(v)) throw ParameterError("grid values must be finite");
                           if (!distinct.insert(v).second) throw ParameterError("grid values must be distinct");
                       }
                   },
               },
               kind_);
}

const std::vector<double>& ParamDistribution::grid_values() const {
    if (const auto* g = std::get_if<GridDist>(&kind_)) return g->values;
    throw ParameterError("distribution is not a grid");
}

double ParamDistribution::draw(Substream& rng) const {
    return std::visit(overloaded{
                          [&](const NormalDist& d) { return d.mean + d.stddev * rng.normal(); },
                          [&](const UniformDist& d) {
                              const double v = d.lo + (d.hi - d.lo) * rng.uniform01();
                              return v < d.hi ? v : std::nextafter(d.hi, d.lo);
                          },
                          [&](const GridDist& d) { return d.values[rng.below(d.values.size())]; },
                      },
                      kind_);
}

bool ParamDistribution::in_support(double v) const {
    return std::visit(overloaded{
                          [&](const NormalDist&) { return std::isfinite(v); },
                          [&](const UniformDist& d) { return v >= d.lo && v < d.hi; },
                          [&](const GridDist& d) {
                              return std::find(d.values.begin(), d.values.end(), v) != d.values.end();
                          },
                      },
                      kind_);
}

ArchitecturePool::ArchitecturePool(std::vector<PoolEntry> entries)
    : entries_(std::move(entries)),
      weights_(entries_.size(), entries_.empty() ? 0.0 : 1.0 / static_cast<double>(entries_.size())) {
    validate();
}

ArchitecturePool::ArchitecturePool(std::vector<PoolEntry> entries, std::vector<double> selection_weights)
    : entries_(std::move(entries)), weights_(std::move(selection_weights)) {
    validate();
}

ArchitecturePool ArchitecturePool::single(Architecture arch) {
    const auto k = static_cast<double>(arch.neuron_count());
    return ArchitecturePool({PoolEntry{std::move(arch), k}});
}

void ArchitecturePool::validate() const {
    if (entries_.empty()) throw ParameterError("architecture pool is empty");
    if (weights_.size() != entries_.size()) {
        throw ParameterError("pool has " + std::to_string(entries_.size()) + " entries but " +
                             std::to_string(weights_.size()) + " selection weights");
    }
    std::set<std::string> ids;
    const std::size_t dim = entries_.front().architecture.input_dim;
    for (const auto& e : entries_) {
        e.architecture.validate();
        if (!ids.insert(e.architecture.id).second) {
            throw ParameterError("duplicate architecture id '" + e.architecture.id + "'");
        }
        if (e.architecture.input_dim != dim) throw ParameterError("pool architectures differ in input_dim");
        if (!std::isfinite(e.complexity) || e.complexity < 0.0) {
            throw ParameterError("complexity k of '" + e.architecture.id + "' must be finite and >= 0");
        }
    }
    for (double w : weights_) {
        if (!std::isfinite(w) || w < 0.0) throw ParameterError("selection weights must be finite and >= 0");
    }
    const double sum = std::accumulate(weights_.begin(), weights_.end(), 0.0);
    if (std::abs(sum - 1.0) > 1e-12) throw ParameterError("selection weights must sum to 1");
}

std::size_t ArchitecturePool::index_of(const std::string& id) const {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (entries_[i].architecture.id == id) return i;
    }
    throw ParameterError("no architecture '" + id + "' in pool");
}

NetworkParams sample_params(const Architecture& arch, const ParamDistribution& dist, SeedSpec seed) {
    Substream rng(seed, StreamPurpose::Params);
    NetworkParams p;
    p.architecture_id = arch.id;
    p.weights.reserve(arch.neuron_count());
    p.thresholds.reserve(arch.neuron_count());
    for (std::size_t l = 0; l < arch.layers.size(); ++l) {
        for (std::size_t j = 0; j < arch.layers[l]; ++j) {
            std::vector<double> w(arch.fan_in(l));
            for (double& v : w) v = dist.draw(rng);
            p.weights.push_back(std::move(w));
            p.thresholds.push_back(dist.draw(rng));
        }
    }
    return p;
}

std::size_t sample_architecture_index(const ArchitecturePool& pool, SeedSpec seed) {
    if (pool.size() == 1) return 0;
    Substream rng(seed, StreamPurpose::Architecture);
    const double u = rng.uniform01();
    const auto& w = pool.selection_weights();
    double cumulative = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        cumulative += w[i];
        if (u < cumulative) return i;
    }
    // u landed in the rounding gap above the last cumulative sum
    for (std::size_t i = w.size(); i-- > 0;) {
        if (w[i] > 0.0) return i;
    }
    return w.size() - 1;
}

const Architecture& sample_architecture(const ArchitecturePool& pool, SeedSpec seed) {
    return pool[sample_architecture_index(pool, seed)].architecture;
}

}  // namespace gibbsnet
