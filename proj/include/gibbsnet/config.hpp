#pragma once

#include <cstdint>
#include <filesystem>
#include <string_view>

#include <json.hpp>

#include "gibbsnet/sampling.hpp"
#include "gibbsnet/selection.hpp"

namespace gibbsnet {

enum class Mode {
    ZeroError,  // rejection-selected networks, plain arithmetic mean
    Gibbs,      // all sampled networks weighted by exp(-beta * m)
    MixedArch,  // as Gibbs, energy m + k(c) over an architecture pool
};

std::string_view to_string(Mode m);
Mode mode_from_string(std::string_view s);

/// Everything needed to build an ensemble reproducibly.
struct RunConfig {
    explicit RunConfig(ArchitecturePool p) : pool(std::move(p)) {}

    Mode mode = Mode::ZeroError;
    std::size_t n = 100;
    double beta = kInfiniteBeta;
    ParamDistribution distribution;
    ArchitecturePool pool;
    std::uint64_t master_seed = 0;
    std::uint64_t max_attempts = 10'000'000;
    ExponentVariant exponent_variant = ExponentVariant::Displayed;

    /// Throws ConfigError on n == 0, negative/NaN beta, or a finite beta in ZeroError mode.
    void validate() const;
};

/// Parses the config document; unknown fields anywhere are errors.
///
/// Required: mode, n, pool; beta is required unless mode is zero_error.
/// Optional: distribution (normal 0/1), master_seed (0), max_attempts (1e7),
/// exponent_variant ("displayed"). Pool entries default k to the neuron count
/// and weights to uniform.
RunConfig parse_run_config(const nlohmann::json& doc);
RunConfig load_run_config(const std::filesystem::path& path);
nlohmann::ordered_json to_json(const RunConfig& cfg);

nlohmann::ordered_json to_json(const Architecture& arch);
Architecture architecture_from_json(const nlohmann::json& doc);

nlohmann::ordered_json to_json(const ParamDistribution& dist);
ParamDistribution distribution_from_json(const nlohmann::json& doc);

/// Number, or the string "inf".
nlohmann::ordered_json beta_to_json(double beta);
double beta_from_json(const nlohmann::json& doc);

}  // namespace gibbsnet
