#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gibbsnet/data.hpp"
#include "gibbsnet/network.hpp"
#include "gibbsnet/selection.hpp"

namespace gibbsnet {

inline constexpr std::uint64_t kDefaultEnumerationCap = 10'000'000;

/// One architecture with every weight and threshold ranging over `values`.
struct GridSpec {
    Architecture arch;
    std::vector<double> values;
    std::uint64_t cap = kDefaultEnumerationCap;

    /// |values|^param_count; throws ResourceError if that exceeds `cap`.
    std::uint64_t enumeration_size() const;
    void validate() const;
};

/// Per-error-level tallies of a full grid enumeration.
///
/// count[m] is the number of assignments with m training errors and
/// f_sum[p][m] the sum of their outputs at probe p. For Hard networks every
/// entry is an integer, so the tallies are exact and order independent.
struct GridLevels {
    std::uint64_t enumeration_size = 0;
    std::vector<std::uint64_t> count;
    std::vector<std::vector<double>> f_sum;
};

/// Enumerates every grid assignment once, split into `threads` index blocks merged in order.
GridLevels enumerate_levels(const GridSpec& spec, const TrainingSet& ts, std::span<const std::vector<double>> probes,
                            unsigned threads = 1);

/// Exact Gibbs average sum(exp(-beta (m + k)) f(x)) / sum(exp(-beta (m + k))) under the uniform grid measure.
double exact_average(const GridSpec& spec, const TrainingSet& ts, double beta, double k, std::span<const double> x,
                     unsigned threads = 1);

std::vector<double> exact_averages(const GridSpec& spec, const TrainingSet& ts, double beta, double k,
                                   std::span<const std::vector<double>> probes, unsigned threads = 1);

struct MixedTerm {
    GridSpec spec;
    double complexity = 0.0;  // k(c)
};

struct MixedAverage {
    std::vector<double> values;             // one per probe
    std::vector<double> architecture_mass;  // limiting Gibbs weight of each term
    std::uint64_t enumeration_size = 0;     // summed over terms
};

/// Exact limit of the mixed-architecture estimator: architecture c drawn with
/// probability pool_weights[c], then parameters uniform on its grid.
MixedAverage exact_mixed_average(std::span<const MixedTerm> terms, std::span<const double> pool_weights,
                                 const TrainingSet& ts, double beta, std::span<const std::vector<double>> probes,
                                 ExponentVariant variant = ExponentVariant::Displayed, unsigned threads = 1);

double exact_mixed_average(std::span<const MixedTerm> terms, std::span<const double> pool_weights,
                           const TrainingSet& ts, double beta, std::span<const double> x,
                           ExponentVariant variant = ExponentVariant::Displayed, unsigned threads = 1);

}  // namespace gibbsnet
