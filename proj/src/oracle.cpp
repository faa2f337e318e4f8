#include "gibbsnet/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "gibbsnet/errors.hpp"
#include "gibbsnet/parallel.hpp"

namespace gibbsnet {

void GridSpec::validate() const {
    arch.validate();
    if (values.empty()) throw ParameterError("grid needs at least one value");
    std::set<double> distinct;
    for (double v : values) {
        if (!std::isfinite(v)) throw ParameterError("grid values must be finite");
        if (!distinct.insert(v).second) throw ParameterError("grid values must be distinct");
    }
    (void)enumeration_size();
}

std::uint64_t GridSpec::enumeration_size() const {
    const std::uint64_t base = values.size();
    std::uint64_t size = 1;
    for (std::size_t i = 0; i < arch.param_count(); ++i) {
        if (base != 0 && size > cap / base) {
            throw ResourceError("grid enumeration of '" + arch.id + "' (" + std::to_string(base) + "^" +
                                std::to_string(arch.param_count()) + ") exceeds the cap of " + std::to_string(cap));
        }
        size *= base;
    }
    return size;
}

namespace {

// Neumaier-compensated running sum.
struct CompensatedSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double v) {
        const double t = sum + v;
        carry += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + carry; }
};

struct BlockTally {
    std::vector<std::uint64_t> count;
    std::vector<std::vector<CompensatedSum>> f_sum;  // [probe][m]
};

// Odometer over grid indices; digit d drives parameter slot d in sample_params order.
class Assignment {
public:
    Assignment(const GridSpec& spec, std::uint64_t start) : spec_(spec), digits_(spec.arch.param_count()) {
        params_.architecture_id = spec.arch.id;
        for (std::size_t l = 0; l < spec.arch.layers.size(); ++l) {
            for (std::size_t j = 0; j < spec.arch.layers[l]; ++j) {
                params_.weights.emplace_back(spec.arch.fan_in(l));
                params_.thresholds.push_back(0.0);
            }
        }
        for (auto& d : digits_) {
            d = start % spec.values.size();
            start /= spec.values.size();
        }
        for (std::size_t slot = 0; slot < digits_.size(); ++slot) assign(slot);
    }

    const NetworkParams& params() const { return params_; }

    void advance() {
        for (std::size_t slot = 0; slot < digits_.size(); ++slot) {
            if (++digits_[slot] < spec_.values.size()) {
                assign(slot);
                return;
            }
            digits_[slot] = 0;
            assign(slot);
        }
    }

private:
    void assign(std::size_t slot) {
        // slots run neuron by neuron: fan-in weights, then the threshold
        std::size_t s = slot;
        for (std::size_t n = 0; n < params_.weights.size(); ++n) {
            const std::size_t width = params_.weights[n].size() + 1;
            if (s < width) {
                double& target = s + 1 == width ? params_.thresholds[n] : params_.weights[n][s];
                target = spec_.values[digits_[slot]];
                return;
            }
            s -= width;
        }
    }

    const GridSpec& spec_;
    std::vector<std::size_t> digits_;
    NetworkParams params_;
};

void check_probe_dims(const GridSpec& spec, const TrainingSet& ts, std::span<const std::vector<double>> probes) {
    if (spec.arch.input_dim != ts.input_dim()) {
        throw DimensionError("grid architecture '" + spec.arch.id + "' does not match the dataset dimension");
    }
    for (const auto& p : probes) {
        if (p.size() != spec.arch.input_dim) throw DimensionError("probe dimension does not match the architecture");
    }
}

void check_beta(double beta) {
    if (std::isnan(beta) || beta < 0.0) throw ParameterError("beta must be >= 0 (or inf)");
}

}  // namespace

GridLevels enumerate_levels(const GridSpec& spec, const TrainingSet& ts, std::span<const std::vector<double>> probes,
                            unsigned threads) {
    spec.validate();
    check_probe_dims(spec, ts, probes);
    const std::uint64_t total = spec.enumeration_size();
    const std::size_t levels = ts.size() + 1;

    std::vector<BlockTally> blocks(chunk_count(total, threads));
    for (auto& b : blocks) {
        b.count.assign(levels, 0);
        b.f_sum.assign(probes.size(), std::vector<CompensatedSum>(levels));
    }
    const std::size_t workers = blocks.size();
    parallel_chunks(workers, threads, [&](std::size_t wb, std::size_t we) {
        for (std::size_t w = wb; w < we; ++w) {
            const std::uint64_t begin = total * w / workers;
            const std::uint64_t end = total * (w + 1) / workers;
            auto& tally = blocks[w];
            Assignment cursor(spec, begin);
            for (std::uint64_t i = begin; i < end; ++i) {
                const std::size_t m = error_count(cursor.params(), spec.arch, ts);
                ++tally.count[m];
                for (std::size_t p = 0; p < probes.size(); ++p) {
                    tally.f_sum[p][m].add(eval_network(cursor.params(), spec.arch, probes[p]));
                }
                if (i + 1 < end) cursor.advance();
            }
        }
    });

    GridLevels out;
    out.enumeration_size = total;
    out.count.assign(levels, 0);
    out.f_sum.assign(probes.size(), std::vector<double>(levels, 0.0));
    std::vector<std::vector<CompensatedSum>> merged(probes.size(), std::vector<CompensatedSum>(levels));
    for (const auto& b : blocks) {
        for (std::size_t m = 0; m < levels; ++m) {
            out.count[m] += b.count[m];
            for (std::size_t p = 0; p < probes.size(); ++p) {
                merged[p][m].add(b.f_sum[p][m].sum);
                merged[p][m].add(b.f_sum[p][m].carry);
            }
        }
    }
    for (std::size_t p = 0; p < probes.size(); ++p) {
        for (std::size_t m = 0; m < levels; ++m) out.f_sum[p][m] = merged[p][m].value();
    }
    return out;
}

std::vector<double> exact_averages(const GridSpec& spec, const TrainingSet& ts, double beta, double k,
                                   std::span<const std::vector<double>> probes, unsigned threads) {
    check_beta(beta);
    if (!std::isfinite(k)) throw ParameterError("complexity k must be finite");
    const auto levels = enumerate_levels(spec, ts, probes, threads);
    // k shifts every energy equally, so it drops out of the normalized ratio.
    std::size_t lowest = 0;
    while (levels.count[lowest] == 0) ++lowest;

    std::vector<double> level_weight(levels.count.size(), 0.0);
    for (std::size_t m = lowest; m < levels.count.size(); ++m) {
        if (levels.count[m] == 0) continue;
        if (std::isinf(beta)) {
            level_weight[m] = m == lowest ? 1.0 : 0.0;
        } else {
            level_weight[m] = std::exp(-beta * static_cast<double>(m - lowest));
        }
    }
    std::vector<double> out;
    out.reserve(probes.size());
    for (std::size_t p = 0; p < probes.size(); ++p) {
        double num = 0.0;
        double den = 0.0;
        for (std::size_t m = lowest; m < levels.count.size(); ++m) {
            if (level_weight[m] == 0.0) continue;
            num += level_weight[m] * levels.f_sum[p][m];
            den += level_weight[m] * static_cast<double>(levels.count[m]);
        }
        out.push_back(num / den);
    }
    return out;
}

double exact_average(const GridSpec& spec, const TrainingSet& ts, double beta, double k, std::span<const double> x,
                     unsigned threads) {
    const std::vector<std::vector<double>> probes{std::vector<double>(x.begin(), x.end())};
    return exact_averages(spec, ts, beta, k, probes, threads).front();
}

MixedAverage exact_mixed_average(std::span<const MixedTerm> terms, std::span<const double> pool_weights,
                                 const TrainingSet& ts, double beta, std::span<const std::vector<double>> probes,
                                 ExponentVariant variant, unsigned threads) {
    check_beta(beta);
    if (terms.empty()) throw ParameterError("mixed average needs at least one architecture");
    if (pool_weights.size() != terms.size()) throw ParameterError("one pool weight per architecture required");
    for (std::size_t c = 0; c < terms.size(); ++c) {
        if (!std::isfinite(terms[c].complexity) || terms[c].complexity < 0.0) {
            throw ParameterError("complexity k must be finite and >= 0");
        }
        if (!std::isfinite(pool_weights[c]) || pool_weights[c] < 0.0) {
            throw ParameterError("pool weights must be finite and >= 0");
        }
    }

    MixedAverage out;
    std::vector<GridLevels> levels;
    for (const auto& t : terms) {
        levels.push_back(enumerate_levels(t.spec, ts, probes, threads));
        out.enumeration_size += levels.back().enumeration_size;
    }

    // Each (architecture c, error level m) cell carries log weight per assignment of
    // log p_c - log |grid_c| + exponent(m, k_c); cells with p_c = 0 or no assignments drop out.
    struct Cell {
        std::size_t c;
        std::size_t m;
        double log_w;
    };
    std::vector<Cell> cells;
    for (std::size_t c = 0; c < terms.size(); ++c) {
        if (pool_weights[c] == 0.0) continue;
        const double base = std::log(pool_weights[c]) - std::log(static_cast<double>(levels[c].enumeration_size));
        for (std::size_t m = 0; m < levels[c].count.size(); ++m) {
            if (levels[c].count[m] == 0) continue;
            cells.push_back({c, m, base});
        }
    }
    if (cells.empty()) throw ParameterError("pool weights leave no architecture with positive mass");

    std::vector<double> cell_w(cells.size(), 0.0);
    const auto k_of = [&](const Cell& cell) { return terms[cell.c].complexity; };
    if (std::isinf(beta)) {
        // Only the minimum-exponent cells survive the limit.
        if (variant == ExponentVariant::Displayed) {
            double lowest = std::numeric_limits<double>::infinity();
            for (const auto& cell : cells) lowest = std::min(lowest, static_cast<double>(cell.m) + k_of(cell));
            double top = -std::numeric_limits<double>::infinity();
            for (const auto& cell : cells) {
                if (static_cast<double>(cell.m) + k_of(cell) == lowest) top = std::max(top, cell.log_w);
            }
            for (std::size_t i = 0; i < cells.size(); ++i) {
                if (static_cast<double>(cells[i].m) + k_of(cells[i]) == lowest) {
                    cell_w[i] = std::exp(cells[i].log_w - top);
                }
            }
        } else {
            std::size_t fewest = std::numeric_limits<std::size_t>::max();
            for (const auto& cell : cells) fewest = std::min(fewest, cell.m);
            double top = -std::numeric_limits<double>::infinity();
            for (const auto& cell : cells) {
                if (cell.m == fewest) top = std::max(top, cell.log_w - k_of(cell));
            }
            for (std::size_t i = 0; i < cells.size(); ++i) {
                if (cells[i].m == fewest) cell_w[i] = std::exp(cells[i].log_w - k_of(cells[i]) - top);
            }
        }
    } else {
        for (auto& cell : cells) {
            const double m = static_cast<double>(cell.m);
            cell.log_w += variant == ExponentVariant::Displayed ? -beta * (m + k_of(cell)) : -beta * m - k_of(cell);
        }
        double top = -std::numeric_limits<double>::infinity();
        for (const auto& cell : cells) top = std::max(top, cell.log_w);
        for (std::size_t i = 0; i < cells.size(); ++i) cell_w[i] = std::exp(cells[i].log_w - top);
    }

    double den = 0.0;
    out.architecture_mass.assign(terms.size(), 0.0);
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const double mass = cell_w[i] * static_cast<double>(levels[cells[i].c].count[cells[i].m]);
        den += mass;
        out.architecture_mass[cells[i].c] += mass;
    }
    for (double& m : out.architecture_mass) m /= den;
    for (std::size_t p = 0; p < probes.size(); ++p) {
        double num = 0.0;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (cell_w[i] == 0.0) continue;
            num += cell_w[i] * levels[cells[i].c].f_sum[p][cells[i].m];
        }
        out.values.push_back(num / den);
    }
    return out;
}

double exact_mixed_average(std::span<const MixedTerm> terms, std::span<const double> pool_weights,
                           const TrainingSet& ts, double beta, std::span<const double> x, ExponentVariant variant,
                           unsigned threads) {
    const std::vector<std::vector<double>> probes{std::vector<double>(x.begin(), x.end())};
    return exact_mixed_average(terms, pool_weights, ts, beta, probes, variant, threads).values.front();
}

}  // namespace gibbsnet
