#include "gibbsnet/selection.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "gibbsnet/errors.hpp"
#include "gibbsnet/parallel.hpp"

namespace gibbsnet {

std::string_view to_string(ExponentVariant v) {
    return v == ExponentVariant::Displayed ? "displayed" : "limit_form";
}

ExponentVariant exponent_variant_from_string(std::string_view s) {
    if (s == "displayed") return ExponentVariant::Displayed;
    if (s == "limit_form") return ExponentVariant::LimitForm;
    throw ParameterError("unknown exponent_variant '" + std::string(s) + "' (expected displayed or limit_form)");
}

namespace {

void check_dims(const Architecture& arch, const TrainingSet& ts) {
    if (arch.input_dim != ts.input_dim()) {
        throw DimensionError("architecture '" + arch.id + "' takes " + std::to_string(arch.input_dim) +
                             " inputs but the training set has dimension " + std::to_string(ts.input_dim()));
    }
}

constexpr std::uint64_t kRejectionBlock = 4096;

}  // namespace

std::size_t error_count(const NetworkParams& params, const Architecture& arch, const TrainingSet& ts) {
    check_dims(arch, ts);
    std::size_t m = 0;
    for (const auto& p : ts) {
        if (classify(eval_network(params, arch, p.x)) != p.label) ++m;
    }
    return m;
}

bool fits_training_set(const NetworkParams& params, const Architecture& arch, const TrainingSet& ts) {
    check_dims(arch, ts);
    for (const auto& p : ts) {
        if (classify(eval_network(params, arch, p.x)) != p.label) return false;
    }
    return true;
}

AcceptanceResult accept_zero_error(const ArchitecturePool& pool, const ParamDistribution& dist,
                                   const TrainingSet& ts, std::uint64_t master_seed,
                                   std::size_t target_count, std::uint64_t max_attempts, unsigned threads) {
    if (target_count == 0) throw ParameterError("target_count must be positive");
    if (max_attempts == 0) throw ParameterError("max_attempts must be positive");
    for (const auto& e : pool.entries()) check_dims(e.architecture, ts);

    AcceptanceResult result;
    result.members.reserve(target_count);
    std::uint64_t next = 0;
    while (next < max_attempts) {
        const std::uint64_t block = std::min(kRejectionBlock, max_attempts - next);
        std::vector<std::optional<ScoredNetwork>> slots(block);
        parallel_chunks(block, threads, [&](std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i) {
                const SeedSpec seed{master_seed, next + i};
                const auto& arch = sample_architecture(pool, seed);
                auto params = sample_params(arch, dist, seed);
                if (fits_training_set(params, arch, ts)) {
                    slots[i] = ScoredNetwork{std::move(params), 0, 0.0, 0.0, next + i};
                }
            }
        });
        for (std::uint64_t i = 0; i < block; ++i) {
            if (!slots[i]) continue;
            result.members.push_back(std::move(*slots[i]));
            if (result.members.size() == target_count) {
                result.attempts = next + i + 1;
                return result;
            }
        }
        next += block;
    }
    throw AcceptanceTooLow(result.members.size(), max_attempts, target_count);
}

AcceptanceResult accept_zero_error(const Architecture& arch, const ParamDistribution& dist,
                                   const TrainingSet& ts, std::uint64_t master_seed,
                                   std::size_t target_count, std::uint64_t max_attempts, unsigned threads) {
    return accept_zero_error(ArchitecturePool::single(arch), dist, ts, master_seed, target_count, max_attempts,
                             threads);
}

std::vector<double> gibbs_weights(std::span<const ScoredNetwork> members, double beta, ExponentVariant variant) {
    if (members.empty()) throw ParameterError("gibbs_weights needs at least one member");
    if (std::isnan(beta) || beta < 0.0) throw ParameterError("beta must be >= 0 (or inf)");
    const std::size_t n = members.size();
    std::vector<double> w(n, 0.0);

    if (std::isinf(beta)) {
        if (variant == ExponentVariant::Displayed) {
            double lowest = members[0].energy;
            for (const auto& s : members) lowest = std::min(lowest, s.energy);
            std::size_t support = 0;
            for (const auto& s : members) support += s.energy == lowest;
            for (std::size_t a = 0; a < n; ++a) {
                if (members[a].energy == lowest) w[a] = 1.0 / static_cast<double>(support);
            }
            return w;
        }
        std::size_t fewest = members[0].errors;
        for (const auto& s : members) fewest = std::min(fewest, s.errors);
        double kmin = std::numeric_limits<double>::infinity();
        for (const auto& s : members) {
            if (s.errors == fewest) kmin = std::min(kmin, s.complexity);
        }
        double total = 0.0;
        for (std::size_t a = 0; a < n; ++a) {
            if (members[a].errors == fewest) {
                w[a] = std::exp(-(members[a].complexity - kmin));
                total += w[a];
            }
        }
        for (double& v : w) v /= total;
        return w;
    }

    std::vector<double> log_w(n);
    for (std::size_t a = 0; a < n; ++a) {
        const auto& s = members[a];
        log_w[a] = variant == ExponentVariant::Displayed
                       ? -beta * s.energy
                       : -beta * static_cast<double>(s.errors) - s.complexity;
    }
    const double top = *std::max_element(log_w.begin(), log_w.end());
    double total = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
        w[a] = std::exp(log_w[a] - top);
        total += w[a];
    }
    for (double& v : w) v /= total;
    return w;
}

std::vector<ScoredNetwork> score_batch(std::uint64_t first, std::uint64_t last, const ArchitecturePool& pool,
                                       const ParamDistribution& dist, const TrainingSet& ts,
                                       std::uint64_t master_seed, Penalty penalty, unsigned threads) {
    if (last < first) throw ParameterError("score_batch range is reversed");
    for (const auto& e : pool.entries()) check_dims(e.architecture, ts);
    std::vector<ScoredNetwork> out(last - first);
    parallel_chunks(out.size(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const SeedSpec seed{master_seed, first + i};
            const auto& entry = pool[sample_architecture_index(pool, seed)];
            auto& s = out[i];
            s.params = sample_params(entry.architecture, dist, seed);
            s.errors = error_count(s.params, entry.architecture, ts);
            s.complexity = penalty == Penalty::Complexity ? entry.complexity : 0.0;
            s.energy = static_cast<double>(s.errors) + s.complexity;
            s.sample_index = first + i;
        }
    });
    return out;
}

}  // namespace gibbsnet
