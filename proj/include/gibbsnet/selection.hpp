#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "gibbsnet/data.hpp"
#include "gibbsnet/network.hpp"
#include "gibbsnet/sampling.hpp"

namespace gibbsnet {

/// Zero-temperature sentinel for the inverse temperature.
inline constexpr double kInfiniteBeta = std::numeric_limits<double>::infinity();

/// How the complexity penalty k(c) enters the Gibbs exponent.
enum class ExponentVariant {
    Displayed,  // exp(-beta * (m + k))
    LimitForm,  // exp(-beta * m - k)
};

std::string_view to_string(ExponentVariant v);
ExponentVariant exponent_variant_from_string(std::string_view s);

/// Whether score_batch adds k(c) to the energy.
enum class Penalty { None, Complexity };

struct ScoredNetwork {
    NetworkParams params;
    std::size_t errors = 0;   // m
    double complexity = 0.0;  // k(c) as applied; 0 outside mixed-architecture runs
    double energy = 0.0;      // m + k
    std::uint64_t sample_index = 0;

    const std::string& architecture_id() const noexcept { return params.architecture_id; }
    bool operator==(const ScoredNetwork&) const = default;
};

/// Number of training points where classify(f(x)) differs from the label.
std::size_t error_count(const NetworkParams& params, const Architecture& arch, const TrainingSet& ts);

/// True iff the network classifies every training point correctly (stops at the first error).
bool fits_training_set(const NetworkParams& params, const Architecture& arch, const TrainingSet& ts);

struct AcceptanceResult {
    std::vector<ScoredNetwork> members;
    std::uint64_t attempts = 0;

    double rate() const {
        return attempts == 0 ? 0.0 : static_cast<double>(members.size()) / static_cast<double>(attempts);
    }
};

/// Rejection sampling from the prior: draws sample indices 0, 1, 2, ... and keeps
/// the zero-error networks until `target_count` are collected.
///
/// Throws AcceptanceTooLow once `max_attempts` draws are spent. The result
/// depends only on the seed, never on `threads`.
AcceptanceResult accept_zero_error(const ArchitecturePool& pool, const ParamDistribution& dist,
                                   const TrainingSet& ts, std::uint64_t master_seed,
                                   std::size_t target_count, std::uint64_t max_attempts,
                                   unsigned threads = 1);

AcceptanceResult accept_zero_error(const Architecture& arch, const ParamDistribution& dist,
                                   const TrainingSet& ts, std::uint64_t master_seed,
                                   std::size_t target_count, std::uint64_t max_attempts,
                                   unsigned threads = 1);

/// Normalized Gibbs weights. beta = kInfiniteBeta puts uniform mass on the
/// minimum-energy members (for LimitForm: minimum m, then proportional to exp(-k)).
std::vector<double> gibbs_weights(std::span<const ScoredNetwork> members, double beta,
                                  ExponentVariant variant = ExponentVariant::Displayed);

/// Samples and scores indices [first, last) in index order.
std::vector<ScoredNetwork> score_batch(std::uint64_t first, std::uint64_t last, const ArchitecturePool& pool,
                                       const ParamDistribution& dist, const TrainingSet& ts,
                                       std::uint64_t master_seed, Penalty penalty = Penalty::None,
                                       unsigned threads = 1);

}  // namespace gibbsnet
