#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "gibbsnet/ensemble.hpp"

namespace gibbsnet {

inline constexpr int kArtifactFormatVersion = 1;

/// Ensemble document: format_version, mode, beta, exponent_variant, master_seed,
/// training_fingerprint, architectures[], members[] (architecture_id,
/// sample_index, weights, thresholds, m, k, energy, weight).
nlohmann::ordered_json to_json(const GibbsEnsemble& ens);

/// Rebuilds and revalidates an ensemble; any violation is a ConfigError.
GibbsEnsemble ensemble_from_json(const nlohmann::json& doc);

std::string format_ensemble(const GibbsEnsemble& ens);
void save_ensemble(const GibbsEnsemble& ens, const std::filesystem::path& path);
GibbsEnsemble load_ensemble(const std::filesystem::path& path);

}  // namespace gibbsnet
