#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "gibbsnet/artifact.hpp"
#include "gibbsnet/config.hpp"
#include "gibbsnet/data.hpp"
#include "gibbsnet/ensemble.hpp"
#include "gibbsnet/errors.hpp"
#include "gibbsnet/oracle.hpp"
#include "gibbsnet/parallel.hpp"

namespace gibbsnet::cli {

namespace {

struct Common {
    std::string config;
    std::string data;
    std::string out;
    std::optional<std::uint64_t> seed;
    unsigned threads = 1;
};

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f << text;
    if (!f) throw IoError("write to '" + path + "' failed");
}

RunConfig load_config(const Common& c) {
    auto cfg = load_run_config(c.config);
    if (c.seed) cfg.master_seed = *c.seed;
    return cfg;
}

std::string beta_text(double beta) { return std::isinf(beta) ? "inf" : format_real(beta); }

double parse_beta(const std::string& s) {
    if (s == "inf") return kInfiniteBeta;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || std::isnan(v) || v < 0.0) {
        throw ConfigError("beta '" + s + "' is not a non-negative number or inf");
    }
    return v;
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<std::size_t> parse_schedule(const std::string& s) {
    std::vector<std::size_t> out;
    for (const auto& item : split_commas(s)) {
        std::size_t v = 0;
        auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (ec != std::errc() || ptr != item.data() + item.size() || v == 0) {
            throw ConfigError("schedule entry '" + item + "' is not a positive integer");
        }
        out.push_back(v);
    }
    if (out.empty()) throw ConfigError("schedule is empty");
    return out;
}

std::vector<std::vector<double>> load_probes(const std::string& path, std::size_t dim) {
    auto probes = load_points(path);
    if (probes.empty()) throw ConfigError("probe file '" + path + "' has no points");
    for (const auto& p : probes) {
        if (p.size() != dim) {
            throw DimensionError("probe file has dimension " + std::to_string(p.size()) + ", expected " +
                                 std::to_string(dim));
        }
    }
    return probes;
}

int cmd_build(const Common& c, std::ostream& out) {
    const auto cfg = load_config(c);
    const auto ts = load_dataset(c.data);
    const auto ens = build(ts, cfg, c.threads);
    save_ensemble(ens, c.out);

    std::map<double, std::size_t> histogram;
    for (const auto& m : ens.members()) ++histogram[m.energy];
    out << "mode: " << to_string(ens.mode()) << "\n";
    out << "n: " << ens.size() << "\n";
    out << "beta: " << beta_text(ens.beta()) << "\n";
    if (ens.mode() == Mode::ZeroError) {
        out << "attempts: " << ens.attempts() << "\n";
        out << "acceptance_rate: " << format_real(ens.acceptance_rate()) << "\n";
    }
    out << "training_accuracy: " << format_real(accuracy(ens, ts)) << "\n";
    out << "energy_histogram:\n";
    for (const auto& [energy, count] : histogram) out << "  " << format_real(energy) << ": " << count << "\n";
    return kOk;
}

int cmd_predict(const Common& c, const std::string& artifact, std::ostream& out) {
    const auto ens = load_ensemble(artifact);
    const auto points = load_points(c.data);
    for (const auto& p : points) {
        if (p.size() != ens.input_dim()) {
            throw DimensionError("points have dimension " + std::to_string(p.size()) + ", ensemble expects " +
                                 std::to_string(ens.input_dim()));
        }
    }
    std::vector<EnsembleEstimate> est(points.size());
    parallel_chunks(points.size(), c.threads, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) est[i] = evaluate(ens, points[i]);
    });

    std::string text;
    for (std::size_t i = 1; i <= ens.input_dim(); ++i) text += "x" + std::to_string(i) + ",";
    text += "value,std_error,label_hat\n";
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (double v : points[i]) text += format_real(v) + ",";
        text += format_real(est[i].value) + "," + format_real(est[i].std_error) + "," +
                std::to_string(classify(est[i].value)) + "\n";
    }
    write_text(c.out, text, out);
    return kOk;
}

int cmd_sweep_beta(const Common& c, const std::string& betas_arg, const std::string& holdout_path,
                   const std::string& probes_path, std::ostream& out) {
    const auto cfg = load_config(c);
    if (cfg.mode == Mode::ZeroError) throw ConfigError("sweep-beta needs a gibbs or mixed_arch config");
    const auto ts = load_dataset(c.data);
    std::optional<TrainingSet> holdout;
    if (!holdout_path.empty()) holdout = load_dataset(holdout_path);
    std::vector<std::vector<double>> probes;
    if (!probes_path.empty()) probes = load_probes(probes_path, ts.input_dim());
    std::vector<double> betas;
    for (const auto& b : split_commas(betas_arg)) betas.push_back(parse_beta(b));
    if (betas.empty()) throw ConfigError("--betas is empty");

    const auto base = build(ts, cfg, c.threads);
    std::string text = "beta,training_accuracy,holdout_accuracy,mean_energy";
    for (const auto& a : base.architectures()) text += ",mass_" + a.id;
    for (std::size_t p = 0; p < probes.size(); ++p) text += ",probe_" + std::to_string(p);
    text += "\n";
    for (double beta : betas) {
        const auto ens = reweight(base, beta);
        text += beta_text(beta) + "," + format_real(accuracy(ens, ts)) + ",";
        text += holdout ? format_real(accuracy(ens, *holdout)) : std::string("nan");
        text += "," + format_real(mean_energy(ens));
        for (double m : architecture_mass(ens)) text += "," + format_real(m);
        for (const auto& p : probes) text += "," + format_real(evaluate(ens, p).value);
        text += "\n";
    }
    write_text(c.out, text, out);
    return kOk;
}

int cmd_convergence(const Common& c, const std::string& schedule_arg, const std::string& probes_path,
                    std::ostream& out, std::ostream& err) {
    const auto cfg = load_config(c);
    const auto ts = load_dataset(c.data);
    const auto schedule = parse_schedule(schedule_arg);
    const auto probes = load_probes(probes_path, ts.input_dim());
    const auto rows = convergence_curve(ts, cfg, schedule, probes, c.threads);

    std::string text = "n,probe,value,std_error,n_effective,degenerate\n";
    for (const auto& r : rows) {
        const bool degenerate = r.n == 1;
        text += std::to_string(r.n) + "," + std::to_string(r.probe) + "," + format_real(r.estimate.value) + "," +
                format_real(r.estimate.std_error) + "," + format_real(r.estimate.n_effective) + "," +
                (degenerate ? "1" : "0") + "\n";
    }
    if (schedule.front() == 1) err << "note: n = 1 rows have std_error 0 by construction (degenerate)\n";
    write_text(c.out, text, out);
    return kOk;
}

int cmd_oracle(const Common& c, const std::string& probes_path, std::uint64_t cap, std::ostream& out,
               std::ostream& err) {
    const auto cfg = load_config(c);
    if (!cfg.distribution.is_grid()) throw ConfigError("oracle needs a grid distribution");
    const auto ts = load_dataset(c.data);
    const auto probes = load_probes(probes_path, ts.input_dim());

    // The rejection and plain Gibbs estimators both converge to the penalty-free average.
    const bool penalised = cfg.mode == Mode::MixedArch;
    std::vector<MixedTerm> terms;
    for (const auto& e : cfg.pool.entries()) {
        terms.push_back({GridSpec{e.architecture, cfg.distribution.grid_values(), cap},
                         penalised ? e.complexity : 0.0});
    }
    const auto variant = penalised ? cfg.exponent_variant : ExponentVariant::Displayed;
    const auto exact = exact_mixed_average(terms, cfg.pool.selection_weights(), ts, cfg.beta, probes, variant,
                                           c.threads);
    const auto ens = build(ts, cfg, c.threads);

    nlohmann::ordered_json doc;
    nlohmann::ordered_json spec;
    spec["grid"] = cfg.distribution.grid_values();
    spec["pool"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < cfg.pool.size(); ++i) {
        nlohmann::ordered_json e;
        e["architecture"] = to_json(cfg.pool[i].architecture);
        e["k"] = terms[i].complexity;
        e["weight"] = cfg.pool.selection_weights()[i];
        spec["pool"].push_back(std::move(e));
    }
    doc["spec"] = std::move(spec);
    doc["mode"] = to_string(cfg.mode);
    doc["beta"] = beta_to_json(cfg.beta);
    doc["exponent_variant"] = to_string(variant);
    doc["n"] = ens.size();
    doc["master_seed"] = cfg.master_seed;
    doc["enumeration_size"] = exact.enumeration_size;
    doc["probes"] = nlohmann::ordered_json::array();

    int status = kOk;
    for (std::size_t p = 0; p < probes.size(); ++p) {
        const auto est = evaluate(ens, probes[p]);
        const double diff = est.value - exact.values[p];
        // A zero sample spread cannot resolve differences below one effective member.
        const double scale = std::max(est.std_error, 1.0 / est.n_effective);
        const double z = diff / scale;
        std::string verdict = "ok";
        if (std::abs(z) > 5.0) {
            verdict = "fail";
            status = kOracleMismatch;
            err << "error: probe " << p << " |z| = " << format_real(std::abs(z)) << " > 5\n";
        } else if (std::abs(z) > 3.0) {
            verdict = "warn";
            err << "warning: probe " << p << " |z| = " << format_real(std::abs(z)) << " > 3\n";
        }
        nlohmann::ordered_json row;
        row["x"] = probes[p];
        row["exact_value"] = exact.values[p];
        row["mc_value"] = est.value;
        row["std_error"] = est.std_error;
        row["z"] = z;
        row["status"] = verdict;
        doc["probes"].push_back(std::move(row));
    }
    write_text(c.out, doc.dump(1) + "\n", out);
    return status;
}

int cmd_split(const Common& c, double fraction, std::uint64_t seed, std::ostream& out) {
    const auto ts = load_dataset(c.data);
    const auto parts = holdout_split(ts, fraction, seed);
    save_dataset(parts.train, c.out + ".train.csv");
    save_dataset(parts.holdout, c.out + ".holdout.csv");
    out << "train: " << parts.train.size() << "\nholdout: " << parts.holdout.size() << "\n";
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Classification by Gibbs ensembles of random feedforward networks", "gibbsnet"};
    app.require_subcommand(1);

    Common c;
    std::string artifact, betas, holdout, probes, schedule;
    std::uint64_t cap = kDefaultEnumerationCap;
    double fraction = 0.2;
    std::uint64_t split_seed = 0;

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        if (needs_config) {
            sub->add_option("--config", c.config, "run config (JSON)")->required();
            sub->add_option("--seed", c.seed, "override master_seed");
        }
        sub->add_option("--data", c.data, "dataset CSV")->required();
        sub->add_option("--threads", c.threads, "worker threads (output does not depend on it)")
            ->check(CLI::Range(1u, 1024u));
    };

    auto* build_cmd = app.add_subcommand("build", "sample, select and weight an ensemble; write the artifact");
    add_common(build_cmd, true);
    build_cmd->add_option("--out", c.out, "artifact path")->required();

    auto* predict_cmd = app.add_subcommand("predict", "evaluate an artifact at points");
    add_common(predict_cmd, false);
    predict_cmd->add_option("--artifact", artifact, "ensemble artifact")->required();
    predict_cmd->add_option("--out", c.out, "output CSV (default stdout)");

    auto* sweep_cmd = app.add_subcommand("sweep-beta", "reweight one sampled member set across beta values");
    add_common(sweep_cmd, true);
    sweep_cmd->add_option("--betas", betas, "comma separated, e.g. 0,1,10,inf")->required();
    sweep_cmd->add_option("--holdout", holdout, "labelled holdout CSV");
    sweep_cmd->add_option("--probes", probes, "probe points CSV");
    sweep_cmd->add_option("--out", c.out, "output CSV (default stdout)");

    auto* conv_cmd = app.add_subcommand("convergence", "estimates on nested prefixes of one ensemble");
    add_common(conv_cmd, true);
    conv_cmd->add_option("--schedule", schedule, "increasing sizes, e.g. 1000,4000,16000")->required();
    conv_cmd->add_option("--probes", probes, "probe points CSV")->required();
    conv_cmd->add_option("--out", c.out, "output CSV (default stdout)");

    auto* oracle_cmd = app.add_subcommand("oracle", "compare Monte Carlo estimates with exact grid enumeration");
    add_common(oracle_cmd, true);
    oracle_cmd->add_option("--probes", probes, "probe points CSV")->required();
    oracle_cmd->add_option("--cap", cap, "maximum grid assignments per architecture");
    oracle_cmd->add_option("--out", c.out, "output JSON (default stdout)");

    auto* split_cmd = app.add_subcommand("split", "seeded train/holdout split");
    split_cmd->add_option("--data", c.data, "dataset CSV")->required();
    split_cmd->add_option("--fraction", fraction, "holdout fraction in (0,1)");
    split_cmd->add_option("--seed", split_seed, "shuffle seed");
    split_cmd->add_option("--out", c.out, "output prefix: writes <out>.train.csv and <out>.holdout.csv")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        if (build_cmd->parsed()) return cmd_build(c, out);
        if (predict_cmd->parsed()) return cmd_predict(c, artifact, out);
        if (sweep_cmd->parsed()) return cmd_sweep_beta(c, betas, holdout, probes, out);
        if (conv_cmd->parsed()) return cmd_convergence(c, schedule, probes, out, err);
        if (oracle_cmd->parsed()) return cmd_oracle(c, probes, cap, out, err);
        if (split_cmd->parsed()) return cmd_split(c, fraction, split_seed, out);
    } catch (const AcceptanceTooLow& e) {
        err << "error: " << e.what() << " (rate " << format_real(e.rate()) << ")\n";
        return kAcceptanceTooLow;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kIoError;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kConfigError;
    }
    return kConfigError;
}

}  // namespace gibbsnet::cli
