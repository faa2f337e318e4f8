#include "gibbsnet/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gibbsnet/errors.hpp"

namespace gibbsnet {

namespace {

// Loose enough for ~1e6 normalized weights accumulated in double.
constexpr double kWeightSumTolerance = 1e-9;

Penalty penalty_for(Mode mode) { return mode == Mode::MixedArch ? Penalty::Complexity : Penalty::None; }

}  // namespace

GibbsEnsemble::GibbsEnsemble(Mode mode, double beta, ExponentVariant variant, std::uint64_t master_seed,
                             std::string training_fingerprint, std::vector<Architecture> architectures,
                             std::vector<ScoredNetwork> members, std::vector<double> weights)
    : mode_(mode),
      beta_(beta),
      variant_(variant),
      master_seed_(master_seed),
      fingerprint_(std::move(training_fingerprint)),
      architectures_(std::move(architectures)),
      members_(std::move(members)),
      weights_(std::move(weights)) {
    if (members_.empty()) throw ParameterError("ensemble has no members");
    if (architectures_.empty()) throw ParameterError("ensemble has no architectures");
    if (weights_.size() != members_.size()) throw ParameterError("ensemble needs one weight per member");
    if (std::isnan(beta_) || beta_ < 0.0) throw ParameterError("ensemble beta must be >= 0");
    if (mode_ == Mode::ZeroError && !std::isinf(beta_)) throw ParameterError("zero_error ensembles have beta = inf");

    for (const auto& a : architectures_) {
        a.validate();
        if (a.input_dim != architectures_.front().input_dim) {
            throw ParameterError("ensemble architectures differ in input_dim");
        }
    }
    arch_index_.reserve(members_.size());
    for (std::size_t i = 0; i < members_.size(); ++i) {
        const auto& s = members_[i];
        auto it = std::find_if(architectures_.begin(), architectures_.end(),
                               [&](const Architecture& a) { return a.id == s.architecture_id(); });
        if (it == architectures_.end()) {
            throw ParameterError("member " + std::to_string(i) + " references unknown architecture '" +
                                 s.architecture_id() + "'");
        }
        s.params.validate_for(*it);
        arch_index_.push_back(static_cast<std::size_t>(it - architectures_.begin()));
        if (!std::isfinite(s.complexity) || s.complexity < 0.0) {
            throw ParameterError("member " + std::to_string(i) + " has invalid complexity");
        }
        if (mode_ != Mode::MixedArch && s.complexity != 0.0) {
            throw ParameterError("complexity penalty is only applied in mixed_arch mode");
        }
        if (s.energy != static_cast<double>(s.errors) + s.complexity) {
            throw ParameterError("member " + std::to_string(i) + " energy is not m + k");
        }
        if (mode_ == Mode::ZeroError && s.errors != 0) {
            throw ParameterError("zero_error ensemble member " + std::to_string(i) + " has errors");
        }
        if (i > 0 && s.sample_index <= members_[i - 1].sample_index) {
            throw ParameterError("members must be in increasing sample_index order");
        }
    }

    double total = 0.0;
    for (double w : weights_) {
        if (!std::isfinite(w) || w < 0.0) throw ParameterError("ensemble weights must be finite and >= 0");
        total += w;
    }
    if (std::abs(total - 1.0) > kWeightSumTolerance) throw ParameterError("ensemble weights do not sum to 1");
    if (mode_ == Mode::ZeroError &&
        std::any_of(weights_.begin(), weights_.end(), [&](double w) { return w != weights_.front(); })) {
        throw ParameterError("zero_error ensemble weights must be uniform");
    }
}

GibbsEnsemble build(const TrainingSet& ts, const RunConfig& config, unsigned threads) {
    config.validate();
    std::vector<Architecture> archs;
    for (const auto& e : config.pool.entries()) {
        if (e.architecture.input_dim != ts.input_dim()) {
            throw DimensionError("architecture '" + e.architecture.id + "' takes " +
                                 std::to_string(e.architecture.input_dim) + " inputs, dataset has " +
                                 std::to_string(ts.input_dim()));
        }
        archs.push_back(e.architecture);
    }

    std::vector<ScoredNetwork> members;
    if (config.mode == Mode::ZeroError) {
        members = accept_zero_error(config.pool, config.distribution, ts, config.master_seed, config.n,
                                    config.max_attempts, threads)
                      .members;
    } else {
        members = score_batch(0, config.n, config.pool, config.distribution, ts, config.master_seed,
                              penalty_for(config.mode), threads);
    }
    auto weights = gibbs_weights(members, config.beta, config.exponent_variant);
    return GibbsEnsemble(config.mode, config.beta, config.exponent_variant, config.master_seed, ts.fingerprint(),
                         std::move(archs), std::move(members), std::move(weights));
}

GibbsEnsemble reweight(const GibbsEnsemble& ens, double beta) {
    auto weights = gibbs_weights(ens.members(), beta, ens.exponent_variant());
    return GibbsEnsemble(ens.mode(), beta, ens.exponent_variant(), ens.master_seed(), ens.training_fingerprint(),
                         ens.architectures(), ens.members(), std::move(weights));
}

GibbsEnsemble prefix(const GibbsEnsemble& ens, std::size_t n) {
    if (n == 0 || n > ens.size()) {
        throw ParameterError("prefix size " + std::to_string(n) + " outside [1, " + std::to_string(ens.size()) + "]");
    }
    std::vector<ScoredNetwork> members(ens.members().begin(), ens.members().begin() + static_cast<std::ptrdiff_t>(n));
    auto weights = gibbs_weights(members, ens.beta(), ens.exponent_variant());
    return GibbsEnsemble(ens.mode(), ens.beta(), ens.exponent_variant(), ens.master_seed(), ens.training_fingerprint(),
                         ens.architectures(), std::move(members), std::move(weights));
}

EnsembleEstimate evaluate(const GibbsEnsemble& ens, std::span<const double> x) {
    if (x.size() != ens.input_dim()) {
        throw DimensionError("ensemble takes " + std::to_string(ens.input_dim()) + " inputs, got " +
                             std::to_string(x.size()));
    }
    const auto& w = ens.weights();
    std::vector<double> f(ens.size());
    double num = 0.0;
    double den = 0.0;
    for (std::size_t a = 0; a < ens.size(); ++a) {
        f[a] = eval_network(ens.members()[a].params, ens.architecture_of(a), x);
        num += w[a] * f[a];
        den += w[a];
    }
    // num <= den term by term, so the ratio stays in [0,1] and is exact when all f agree.
    EnsembleEstimate est;
    est.value = num / den;
    double var = 0.0;
    double sum_sq = 0.0;
    for (std::size_t a = 0; a < ens.size(); ++a) {
        const double wn = w[a] / den;
        const double d = f[a] - est.value;
        var += wn * wn * d * d;
        sum_sq += wn * wn;
    }
    est.std_error = std::sqrt(var);
    est.n_effective = 1.0 / sum_sq;
    return est;
}

int predict(const GibbsEnsemble& ens, std::span<const double> x) { return classify(evaluate(ens, x).value); }

double accuracy(const GibbsEnsemble& ens, const TrainingSet& ts) {
    std::size_t correct = 0;
    for (const auto& p : ts) correct += predict(ens, p.x) == p.label;
    return static_cast<double>(correct) / static_cast<double>(ts.size());
}

std::vector<double> architecture_mass(const GibbsEnsemble& ens) {
    std::vector<double> mass(ens.architectures().size(), 0.0);
    for (std::size_t a = 0; a < ens.size(); ++a) mass[ens.architecture_index_of(a)] += ens.weights()[a];
    return mass;
}

double mean_energy(const GibbsEnsemble& ens) {
    double e = 0.0;
    for (std::size_t a = 0; a < ens.size(); ++a) e += ens.weights()[a] * ens.members()[a].energy;
    return e;
}

std::vector<ConvergencePoint> convergence_curve(const TrainingSet& ts, const RunConfig& config,
                                                std::span<const std::size_t> schedule,
                                                std::span<const std::vector<double>> probes, unsigned threads) {
    if (schedule.empty()) throw ParameterError("convergence schedule is empty");
    if (schedule.front() == 0) throw ParameterError("convergence schedule entries must be positive");
    for (std::size_t i = 1; i < schedule.size(); ++i) {
        if (schedule[i] <= schedule[i - 1]) throw ParameterError("convergence schedule must be increasing");
    }
    if (probes.empty()) throw ParameterError("convergence needs at least one probe point");
    for (const auto& p : probes) {
        if (p.size() != ts.input_dim()) throw DimensionError("probe dimension does not match the dataset");
    }
    RunConfig full = config;
    full.n = schedule.back();
    const auto ens = build(ts, full, threads);

    std::vector<ConvergencePoint> rows;
    rows.reserve(schedule.size() * probes.size());
    for (std::size_t n : schedule) {
        const auto sub = prefix(ens, n);
        for (std::size_t p = 0; p < probes.size(); ++p) rows.push_back({n, p, evaluate(sub, probes[p])});
    }
    return rows;
}

}  // namespace gibbsnet
