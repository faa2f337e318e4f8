#include "gibbsnet/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "gibbsnet/errors.hpp"

namespace gibbsnet {

using nlohmann::json;
using nlohmann::ordered_json;

std::string_view to_string(Mode m) {
    switch (m) {
    case Mode::ZeroError:
        return "zero_error";
    case Mode::Gibbs:
        return "gibbs";
    case Mode::MixedArch:
        return "mixed_arch";
    }
    return "zero_error";
}

Mode mode_from_string(std::string_view s) {
    if (s == "zero_error") return Mode::ZeroError;
    if (s == "gibbs") return Mode::Gibbs;
    if (s == "mixed_arch") return Mode::MixedArch;
    throw ConfigError("unknown mode '" + std::string(s) + "' (expected zero_error, gibbs or mixed_arch)");
}

void RunConfig::validate() const {
    if (n == 0) throw ConfigError("n must be at least 1");
    if (std::isnan(beta) || beta < 0.0) throw ConfigError("beta must be >= 0 or \"inf\"");
    if (mode == Mode::ZeroError && !std::isinf(beta)) {
        throw ConfigError("zero_error mode is the beta = inf limit; omit beta or set it to \"inf\"");
    }
    if (max_attempts == 0) throw ConfigError("max_attempts must be positive");
}

namespace {

void require_object(const json& doc, std::string_view what, std::initializer_list<std::string_view> allowed) {
    if (!doc.is_object()) throw ConfigError(std::string(what) + " must be an object");
    for (const auto& [key, _] : doc.items()) {
        bool known = false;
        for (auto a : allowed) known = known || key == a;
        if (!known) throw ConfigError("unknown field '" + key + "' in " + std::string(what));
    }
}

const json& field(const json& doc, const char* name, std::string_view what) {
    auto it = doc.find(name);
    if (it == doc.end()) throw ConfigError(std::string(what) + " is missing '" + name + "'");
    return *it;
}

double real(const json& v, std::string_view what) {
    if (!v.is_number()) throw ConfigError(std::string(what) + " must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(std::string(what) + " must be finite");
    return d;
}

std::uint64_t unsigned_int(const json& v, std::string_view what) {
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
        throw ConfigError(std::string(what) + " must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

template <class F>
auto rethrow_as_config(F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
}

}  // namespace

ordered_json to_json(const Architecture& arch) {
    ordered_json j;
    j["id"] = arch.id;
    j["input_dim"] = arch.input_dim;
    j["layers"] = arch.layers;
    j["activation"] = to_string(arch.activation);
    return j;
}

Architecture architecture_from_json(const json& doc) {
    require_object(doc, "architecture", {"id", "input_dim", "layers", "activation"});
    Architecture a;
    const auto& id = field(doc, "id", "architecture");
    if (!id.is_string()) throw ConfigError("architecture id must be a string");
    a.id = id.get<std::string>();
    a.input_dim = unsigned_int(field(doc, "input_dim", "architecture"), "architecture input_dim");
    const auto& layers = field(doc, "layers", "architecture");
    if (!layers.is_array()) throw ConfigError("architecture layers must be an array");
    for (const auto& w : layers) a.layers.push_back(unsigned_int(w, "layer width"));
    if (auto it = doc.find("activation"); it != doc.end()) {
        if (!it->is_string()) throw ConfigError("activation must be a string");
        a.activation = rethrow_as_config([&] { return activation_from_string(it->get<std::string>()); });
    }
    rethrow_as_config([&] { a.validate(); return 0; });
    return a;
}

ordered_json to_json(const ParamDistribution& dist) {
    ordered_json j;
    if (const auto* d = std::get_if<NormalDist>(&dist.kind())) {
        j["kind"] = "normal";
        j["mean"] = d->mean;
        j["stddev"] = d->stddev;
    } else if (const auto* d = std::get_if<UniformDist>(&dist.kind())) {
        j["kind"] = "uniform";
        j["lo"] = d->lo;
        j["hi"] = d->hi;
    } else {
        j["kind"] = "grid";
        j["values"] = dist.grid_values();
    }
    return j;
}

ParamDistribution distribution_from_json(const json& doc) {
    if (!doc.is_object()) throw ConfigError("distribution must be an object");
    const auto& kind = field(doc, "kind", "distribution");
    if (!kind.is_string()) throw ConfigError("distribution kind must be a string");
    const auto k = kind.get<std::string>();
    return rethrow_as_config([&]() -> ParamDistribution {
        if (k == "normal") {
            require_object(doc, "normal distribution", {"kind", "mean", "stddev"});
            return ParamDistribution::normal(real(field(doc, "mean", "normal distribution"), "mean"),
                                             real(field(doc, "stddev", "normal distribution"), "stddev"));
        }
        if (k == "uniform") {
            require_object(doc, "uniform distribution", {"kind", "lo", "hi"});
            return ParamDistribution::uniform(real(field(doc, "lo", "uniform distribution"), "lo"),
                                              real(field(doc, "hi", "uniform distribution"), "hi"));
        }
        if (k == "grid") {
            require_object(doc, "grid distribution", {"kind", "values"});
            const auto& vals = field(doc, "values", "grid distribution");
            if (!vals.is_array()) throw ConfigError("grid values must be an array");
            std::vector<double> v;
            for (const auto& x : vals) v.push_back(real(x, "grid value"));
            return ParamDistribution::grid(std::move(v));
        }
        throw ConfigError("unknown distribution kind '" + k + "' (expected normal, uniform or grid)");
    });
}

ordered_json beta_to_json(double beta) {
    if (std::isinf(beta)) return "inf";
    return beta;
}

double beta_from_json(const json& doc) {
    if (doc.is_string() && doc.get<std::string>() == "inf") return kInfiniteBeta;
    if (!doc.is_number()) throw ConfigError("beta must be a number or \"inf\"");
    const double b = doc.get<double>();
    if (std::isnan(b) || b < 0.0) throw ConfigError("beta must be >= 0");
    return b;
}

RunConfig parse_run_config(const json& doc) {
    require_object(doc, "config",
                   {"mode", "n", "beta", "distribution", "pool", "master_seed", "max_attempts", "exponent_variant"});
    const auto& pool_doc = field(doc, "pool", "config");
    if (!pool_doc.is_array() || pool_doc.empty()) throw ConfigError("pool must be a non-empty array");

    std::vector<PoolEntry> entries;
    std::vector<double> weights;
    std::size_t weighted = 0;
    for (const auto& e : pool_doc) {
        require_object(e, "pool entry", {"architecture", "k", "weight"});
        PoolEntry entry{architecture_from_json(field(e, "architecture", "pool entry")), 0.0};
        entry.complexity = e.contains("k") ? real(e["k"], "k") : static_cast<double>(entry.architecture.neuron_count());
        if (e.contains("weight")) {
            weights.push_back(real(e["weight"], "pool weight"));
            ++weighted;
        }
        entries.push_back(std::move(entry));
    }
    if (weighted != 0 && weighted != entries.size()) {
        throw ConfigError("give a weight for every pool entry or for none");
    }
    ArchitecturePool pool = rethrow_as_config([&] {
        return weighted == 0 ? ArchitecturePool(std::move(entries))
                             : ArchitecturePool(std::move(entries), std::move(weights));
    });

    RunConfig cfg(std::move(pool));
    const auto& mode = field(doc, "mode", "config");
    if (!mode.is_string()) throw ConfigError("mode must be a string");
    cfg.mode = mode_from_string(mode.get<std::string>());
    cfg.n = unsigned_int(field(doc, "n", "config"), "n");
    if (auto it = doc.find("beta"); it != doc.end()) {
        cfg.beta = beta_from_json(*it);
    } else if (cfg.mode != Mode::ZeroError) {
        throw ConfigError("config is missing 'beta' (required for gibbs and mixed_arch modes)");
    }
    if (auto it = doc.find("distribution"); it != doc.end()) cfg.distribution = distribution_from_json(*it);
    if (auto it = doc.find("master_seed"); it != doc.end()) cfg.master_seed = unsigned_int(*it, "master_seed");
    if (auto it = doc.find("max_attempts"); it != doc.end()) cfg.max_attempts = unsigned_int(*it, "max_attempts");
    if (auto it = doc.find("exponent_variant"); it != doc.end()) {
        if (!it->is_string()) throw ConfigError("exponent_variant must be a string");
        cfg.exponent_variant =
            rethrow_as_config([&] { return exponent_variant_from_string(it->get<std::string>()); });
    }
    cfg.validate();
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config '" + path.string() + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config '" + path.string() + "' is not valid JSON: " + e.what());
    }
    return parse_run_config(doc);
}

ordered_json to_json(const RunConfig& cfg) {
    ordered_json j;
    j["mode"] = to_string(cfg.mode);
    j["n"] = cfg.n;
    j["beta"] = beta_to_json(cfg.beta);
    j["distribution"] = to_json(cfg.distribution);
    ordered_json pool = ordered_json::array();
    for (std::size_t i = 0; i < cfg.pool.size(); ++i) {
        ordered_json e;
        e["architecture"] = to_json(cfg.pool[i].architecture);
        e["k"] = cfg.pool[i].complexity;
        e["weight"] = cfg.pool.selection_weights()[i];
        pool.push_back(std::move(e));
    }
    j["pool"] = std::move(pool);
    j["master_seed"] = cfg.master_seed;
    j["max_attempts"] = cfg.max_attempts;
    j["exponent_variant"] = to_string(cfg.exponent_variant);
    return j;
}

}  // namespace gibbsnet
