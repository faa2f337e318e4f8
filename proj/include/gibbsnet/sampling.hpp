#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "gibbsnet/network.hpp"
#include "gibbsnet/random.hpp"

namespace gibbsnet {

struct NormalDist {
    double mean = 0.0;
    double stddev = 1.0;
};

struct UniformDist {
    double lo = -1.0;
    double hi = 1.0;
};

/// Uniform over a finite list of values; shares its measure with the exact oracle.
struct GridDist {
    std::vector<double> values;
};

/// Law of every weight and threshold (one shared distribution, i.i.d. draws).
class ParamDistribution {
public:
    using Kind = std::variant<NormalDist, UniformDist, GridDist>;

    ParamDistribution() : kind_(NormalDist{}) {}
    /// Throws ParameterError on stddev <= 0, lo >= hi, or a bad grid.
    ParamDistribution(Kind kind);

    static ParamDistribution normal(double mean, double stddev) { return {NormalDist{mean, stddev}}; }
    static ParamDistribution uniform(double lo, double hi) { return {UniformDist{lo, hi}}; }
    static ParamDistribution grid(std::vector<double> values) { return {GridDist{std::move(values)}}; }

    const Kind& kind() const noexcept { return kind_; }
    bool is_grid() const noexcept { return std::holds_alternative<GridDist>(kind_); }
    const std::vector<double>& grid_values() const;

    double draw(Substream& rng) const;
    bool in_support(double v) const;

private:
    Kind kind_;
};

struct PoolEntry {
    Architecture architecture;
    double complexity = 0.0;  // k(c)
};

/// Finite set of candidate architectures with a selection law over them.
class ArchitecturePool {
public:
    /// Uniform selection weights.
    explicit ArchitecturePool(std::vector<PoolEntry> entries);
    ArchitecturePool(std::vector<PoolEntry> entries, std::vector<double> selection_weights);

    /// Single architecture with k(c) = neuron count.
    static ArchitecturePool single(Architecture arch);

    std::size_t size() const noexcept { return entries_.size(); }
    const std::vector<PoolEntry>& entries() const noexcept { return entries_; }
    const PoolEntry& operator[](std::size_t i) const { return entries_[i]; }
    const std::vector<double>& selection_weights() const noexcept { return weights_; }
    std::size_t index_of(const std::string& id) const;

private:
    void validate() const;

    std::vector<PoolEntry> entries_;
    std::vector<double> weights_;
};

NetworkParams sample_params(const Architecture& arch, const ParamDistribution& dist, SeedSpec seed);

/// Index into `pool` of the architecture drawn for `seed`.
std::size_t sample_architecture_index(const ArchitecturePool& pool, SeedSpec seed);
const Architecture& sample_architecture(const ArchitecturePool& pool, SeedSpec seed);

}  // namespace gibbsnet
