#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gibbsnet/config.hpp"
#include "gibbsnet/data.hpp"
#include "gibbsnet/selection.hpp"

namespace gibbsnet {

struct EnsembleEstimate {
    double value = 0.0;
    double std_error = 0.0;
    double n_effective = 0.0;  // 1 / sum of squared normalized weights
};

/// Weighted set of sampled networks. Immutable; the constructor checks every invariant.
class GibbsEnsemble {
public:
    GibbsEnsemble(Mode mode, double beta, ExponentVariant variant, std::uint64_t master_seed,
                  std::string training_fingerprint, std::vector<Architecture> architectures,
                  std::vector<ScoredNetwork> members, std::vector<double> weights);

    Mode mode() const noexcept { return mode_; }
    double beta() const noexcept { return beta_; }
    ExponentVariant exponent_variant() const noexcept { return variant_; }
    std::uint64_t master_seed() const noexcept { return master_seed_; }
    const std::string& training_fingerprint() const noexcept { return fingerprint_; }
    const std::vector<Architecture>& architectures() const noexcept { return architectures_; }
    const std::vector<ScoredNetwork>& members() const noexcept { return members_; }
    const std::vector<double>& weights() const noexcept { return weights_; }
    std::size_t size() const noexcept { return members_.size(); }
    std::size_t input_dim() const noexcept { return architectures_.front().input_dim; }

    const Architecture& architecture_of(std::size_t member) const { return architectures_[arch_index_[member]]; }
    std::size_t architecture_index_of(std::size_t member) const { return arch_index_[member]; }

    /// Prior draws consumed, i.e. the last member's sample index + 1.
    std::uint64_t attempts() const noexcept { return members_.back().sample_index + 1; }
    /// members / attempts; meaningful for ZeroError ensembles.
    double acceptance_rate() const noexcept {
        return static_cast<double>(members_.size()) / static_cast<double>(attempts());
    }

private:
    Mode mode_;
    double beta_;
    ExponentVariant variant_;
    std::uint64_t master_seed_;
    std::string fingerprint_;
    std::vector<Architecture> architectures_;
    std::vector<ScoredNetwork> members_;
    std::vector<double> weights_;
    std::vector<std::size_t> arch_index_;
};

GibbsEnsemble build(const TrainingSet& ts, const RunConfig& config, unsigned threads = 1);

/// Same members, weights recomputed at `beta`. ZeroError ensembles only accept beta = inf.
GibbsEnsemble reweight(const GibbsEnsemble& ens, double beta);

/// The first `n` members with weights recomputed over them.
GibbsEnsemble prefix(const GibbsEnsemble& ens, std::size_t n);

EnsembleEstimate evaluate(const GibbsEnsemble& ens, std::span<const double> x);

/// 1 iff evaluate(ens, x).value >= 0.5.
int predict(const GibbsEnsemble& ens, std::span<const double> x);

double accuracy(const GibbsEnsemble& ens, const TrainingSet& ts);

/// Total weight per entry of architectures().
std::vector<double> architecture_mass(const GibbsEnsemble& ens);

/// Weighted mean of the member energies.
double mean_energy(const GibbsEnsemble& ens);

struct ConvergencePoint {
    std::size_t n = 0;
    std::size_t probe = 0;
    EnsembleEstimate estimate;
};

/// Builds one ensemble of size max(schedule) and evaluates its nested prefixes.
std::vector<ConvergencePoint> convergence_curve(const TrainingSet& ts, const RunConfig& config,
                                                std::span<const std::size_t> schedule,
                                                std::span<const std::vector<double>> probes,
                                                unsigned threads = 1);

}  // namespace gibbsnet
