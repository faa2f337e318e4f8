#include "gibbsnet/artifact.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "gibbsnet/errors.hpp"

namespace gibbsnet {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

void only_fields(const json& obj, std::initializer_list<const char*> names, const char* what) {
    if (!obj.is_object()) throw ConfigError(std::string(what) + " must be an object");
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (const char* n : names) known = known || key == n;
        if (!known) throw ConfigError("unknown field '" + key + "' in " + what);
    }
}

}  // namespace

ordered_json to_json(const GibbsEnsemble& ens) {
    ordered_json doc;
    doc["format_version"] = kArtifactFormatVersion;
    doc["mode"] = to_string(ens.mode());
    doc["beta"] = beta_to_json(ens.beta());
    doc["exponent_variant"] = to_string(ens.exponent_variant());
    doc["master_seed"] = ens.master_seed();
    doc["training_fingerprint"] = ens.training_fingerprint();
    ordered_json archs = ordered_json::array();
    for (const auto& a : ens.architectures()) archs.push_back(to_json(a));
    doc["architectures"] = std::move(archs);
    ordered_json members = ordered_json::array();
    for (std::size_t i = 0; i < ens.size(); ++i) {
        const auto& s = ens.members()[i];
        ordered_json m;
        m["architecture_id"] = s.architecture_id();
        m["sample_index"] = s.sample_index;
        m["weights"] = s.params.weights;
        m["thresholds"] = s.params.thresholds;
        m["m"] = s.errors;
        m["k"] = s.complexity;
        m["energy"] = s.energy;
        m["weight"] = ens.weights()[i];
        members.push_back(std::move(m));
    }
    doc["members"] = std::move(members);
    return doc;
}

GibbsEnsemble ensemble_from_json(const json& doc) {
    try {
        only_fields(doc,
                    {"format_version", "mode", "beta", "exponent_variant", "master_seed", "training_fingerprint",
                     "architectures", "members"},
                    "artifact");
        const int version = doc.at("format_version").get<int>();
        if (version != kArtifactFormatVersion) {
            throw ConfigError("unsupported artifact format_version " + std::to_string(version));
        }
        const Mode mode = mode_from_string(doc.at("mode").get<std::string>());
        const double beta = beta_from_json(doc.at("beta"));
        const auto variant = exponent_variant_from_string(doc.at("exponent_variant").get<std::string>());
        const auto seed = doc.at("master_seed").get<std::uint64_t>();
        auto fingerprint = doc.at("training_fingerprint").get<std::string>();

        std::vector<Architecture> archs;
        for (const auto& a : doc.at("architectures")) archs.push_back(architecture_from_json(a));

        std::vector<ScoredNetwork> members;
        std::vector<double> weights;
        for (const auto& m : doc.at("members")) {
            only_fields(m, {"architecture_id", "sample_index", "weights", "thresholds", "m", "k", "energy", "weight"},
                        "artifact member");
            ScoredNetwork s;
            s.params.architecture_id = m.at("architecture_id").get<std::string>();
            s.sample_index = m.at("sample_index").get<std::uint64_t>();
            s.params.weights = m.at("weights").get<std::vector<std::vector<double>>>();
            s.params.thresholds = m.at("thresholds").get<std::vector<double>>();
            s.errors = m.at("m").get<std::size_t>();
            s.complexity = m.at("k").get<double>();
            s.energy = m.at("energy").get<double>();
            weights.push_back(m.at("weight").get<double>());
            members.push_back(std::move(s));
        }
        GibbsEnsemble ens(mode, beta, variant, seed, std::move(fingerprint), std::move(archs), std::move(members),
                          std::move(weights));
        // stored weights must be the Gibbs weights of the stored energies
        const auto expected = gibbs_weights(ens.members(), ens.beta(), ens.exponent_variant());
        for (std::size_t i = 0; i < expected.size(); ++i) {
            if (std::abs(expected[i] - ens.weights()[i]) > 1e-12) {
                throw ConfigError("member " + std::to_string(i) + " weight disagrees with its energy at this beta");
            }
        }
        return ens;
    } catch (const ConfigError&) {
        throw;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed artifact: ") + e.what());
    } catch (const Error& e) {
        throw ConfigError(std::string("invalid artifact: ") + e.what());
    }
}

std::string format_ensemble(const GibbsEnsemble& ens) { return to_json(ens).dump(1) + "\n"; }

void save_ensemble(const GibbsEnsemble& ens, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << format_ensemble(ens);
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

GibbsEnsemble load_ensemble(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open artifact '" + path.string() + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("artifact '" + path.string() + "' is not valid JSON: " + e.what());
    }
    return ensemble_from_json(doc);
}

}  // namespace gibbsnet
