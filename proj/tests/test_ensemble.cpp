#include <doctest.h>

#include <cmath>
#include <numeric>

#include "gibbsnet/artifact.hpp"
#include "gibbsnet/ensemble.hpp"
#include "gibbsnet/errors.hpp"
#include "gibbsnet/oracle.hpp"
#include "support.hpp"

using namespace gibbsnet;
using testsupport::double_layer;
using testsupport::single_neuron;

namespace {

RunConfig config_for(Mode mode, Architecture arch, std::size_t n, double beta = kInfiniteBeta,
                     std::uint64_t seed = 1) {
    RunConfig cfg(ArchitecturePool::single(std::move(arch)));
    cfg.mode = mode;
    cfg.n = n;
    cfg.beta = beta;
    cfg.master_seed = seed;
    return cfg;
}

// Single-neuron members that output a constant: 1 if `on`, else 0.
ScoredNetwork constant_member(bool on, std::uint64_t index) {
    ScoredNetwork s;
    s.params = NetworkParams{"single", {{0, 0}}, {on ? -1.0 : 1.0}};
    s.sample_index = index;
    return s;
}

GibbsEnsemble constant_ensemble(const std::vector<bool>& outputs, std::vector<double> weights) {
    std::vector<ScoredNetwork> members;
    for (std::size_t i = 0; i < outputs.size(); ++i) members.push_back(constant_member(outputs[i], i));
    return GibbsEnsemble(Mode::Gibbs, 0.0, ExponentVariant::Displayed, 0, "test", {single_neuron(2)},
                         std::move(members), std::move(weights));
}

}  // namespace

TEST_CASE("zero-error ensemble reproduces every training label exactly") {
    const auto ts = testsupport::half_space(50, 2024);
    const auto ens = build(ts, config_for(Mode::ZeroError, single_neuron(2), 100));
    CHECK(ens.size() == 100);
    for (double w : ens.weights()) CHECK(w == ens.weights().front());
    for (const auto& p : ts) {
        const auto est = evaluate(ens, p.x);
        CHECK(est.value == static_cast<double>(p.label));
        CHECK(est.std_error == 0.0);
        CHECK(predict(ens, p.x) == p.label);
    }
    CHECK(accuracy(ens, ts) == 1.0);
    CHECK(ens.acceptance_rate() > 0.0);
    CHECK(ens.training_fingerprint() == ts.fingerprint());
}

TEST_CASE("gibbs ensemble at beta = 0 is an unweighted mean") {
    const auto ts = testsupport::half_space(30, 5);
    const auto ens = build(ts, config_for(Mode::Gibbs, double_layer(2, 2), 50, 0.0));
    for (double w : ens.weights()) CHECK(std::abs(w - 1.0 / 50) <= 1e-12);
    Substream cloud({1, 1}, StreamPurpose::Aux);
    for (int i = 0; i < 20; ++i) {
        const std::vector<double> x{cloud.uniform01(), cloud.uniform01()};
        double mean = 0.0;
        for (std::size_t a = 0; a < ens.size(); ++a) mean += eval_network(ens.members()[a].params, ens.architecture_of(a), x);
        mean /= static_cast<double>(ens.size());
        CHECK(std::abs(evaluate(ens, x).value - mean) <= 1e-12);
    }
}

TEST_CASE("build is deterministic and thread independent") {
    const auto ts = testsupport::half_space(30, 5);
    RunConfig cfg(ArchitecturePool({{single_neuron(2, "a"), 1}, {double_layer(2, 2, "b"), 3}}));
    cfg.mode = Mode::MixedArch;
    cfg.n = 400;
    cfg.beta = 0.8;
    cfg.master_seed = 77;
    const auto text = format_ensemble(build(ts, cfg, 1));
    CHECK(format_ensemble(build(ts, cfg, 1)) == text);
    CHECK(format_ensemble(build(ts, cfg, 4)) == text);
    cfg.master_seed = 78;
    CHECK(format_ensemble(build(ts, cfg, 1)) != text);
}

TEST_CASE("evaluate examples") {
    const std::vector<double> x{0.3, 0.3};
    SUBCASE("constant ensemble") {
        const auto ens = constant_ensemble({true, true, true}, {0.2, 0.3, 0.5});
        const auto est = evaluate(ens, x);
        CHECK(est.value == 1.0);
        CHECK(est.std_error == 0.0);
    }
    SUBCASE("half the members fire") {
        const auto ens = constant_ensemble({true, false, true, false}, {0.25, 0.25, 0.25, 0.25});
        const auto est = evaluate(ens, x);
        CHECK(est.value == doctest::Approx(0.5).epsilon(1e-15));
        // sqrt(4 * 0.25^2 * 0.5^2) = 0.25
        CHECK(est.std_error == doctest::Approx(0.25).epsilon(1e-15));
        CHECK(est.n_effective == doctest::Approx(4.0).epsilon(1e-15));
    }
    SUBCASE("tie goes to class 1, just below goes to 0") {
        CHECK(predict(constant_ensemble({true, false}, {0.5, 0.5}), x) == 1);
        CHECK(predict(constant_ensemble({true, false}, {0.49, 0.51}), x) == 0);
        CHECK(evaluate(constant_ensemble({true, false}, {0.49, 0.51}), x).value == doctest::Approx(0.49));
    }
    SUBCASE("dimension mismatch") {
        const auto ens = constant_ensemble({true}, {1.0});
        const std::vector<double> bad{1, 2, 3};
        CHECK_THROWS_AS(evaluate(ens, bad), DimensionError);
        CHECK_THROWS_AS(predict(ens, bad), DimensionError);
    }
}

TEST_CASE("estimates stay in [0,1] for smooth and hard ensembles") {
    const auto ts = testsupport::half_space(20, 3);
    for (auto act : {Activation::Hard, Activation::Smooth}) {
        auto arch = double_layer(2, 3);
        arch.activation = act;
        const auto ens = build(ts, config_for(Mode::Gibbs, arch, 200, 1.5));
        Substream cloud({2, 2}, StreamPurpose::Aux);
        for (int i = 0; i < 200; ++i) {
            const std::vector<double> x{4 * cloud.normal(), 4 * cloud.normal()};
            const auto est = evaluate(ens, x);
            CHECK(est.value >= 0.0);
            CHECK(est.value <= 1.0);
            CHECK(est.std_error >= 0.0);
        }
    }
}

TEST_CASE("prefix nesting") {
    const auto ts = testsupport::half_space(15, 3);
    for (Mode mode : {Mode::ZeroError, Mode::Gibbs}) {
        const double beta = mode == Mode::ZeroError ? kInfiniteBeta : 2.0;
        const auto small = build(ts, config_for(mode, single_neuron(2), 30, beta));
        const auto large = build(ts, config_for(mode, single_neuron(2), 75, beta));
        for (std::size_t i = 0; i < small.size(); ++i) CHECK(small.members()[i] == large.members()[i]);
        CHECK(format_ensemble(prefix(large, 30)) == format_ensemble(small));
    }
}

TEST_CASE("zero-temperature gibbs ensemble equals the zero-error ensemble of its support") {
    const auto ts = testsupport::half_space(10, 12, 0.5);
    const auto dist = ParamDistribution::grid({-1, -0.5, 0, 0.5, 1});
    RunConfig cfg = config_for(Mode::Gibbs, single_neuron(2), 3000, kInfiniteBeta, 4);
    cfg.distribution = dist;
    const auto gibbs = build(ts, cfg);

    std::vector<ScoredNetwork> zero;
    for (const auto& s : gibbs.members()) {
        if (s.errors == 0) zero.push_back(s);
    }
    REQUIRE(!zero.empty());
    std::vector<double> uniform(zero.size(), 1.0 / static_cast<double>(zero.size()));
    const GibbsEnsemble rejection(Mode::ZeroError, kInfiniteBeta, ExponentVariant::Displayed, 4, ts.fingerprint(),
                                  gibbs.architectures(), zero, uniform);

    // the rejection path over the same seed finds the same networks
    const auto accepted = accept_zero_error(cfg.pool, dist, ts, 4, zero.size(), 3000);
    CHECK(accepted.members == zero);

    Substream cloud({5, 5}, StreamPurpose::Aux);
    for (int i = 0; i < 50; ++i) {
        const std::vector<double> x{2 * cloud.uniform01() - 0.5, 2 * cloud.uniform01() - 0.5};
        CHECK(std::abs(evaluate(gibbs, x).value - evaluate(rejection, x).value) <= 1e-12);
    }
}

TEST_CASE("monte carlo agrees with the exact grid average") {
    const auto ts = TrainingSet({{{-1, 0.5}, 0}, {{0.5, 1}, 1}, {{1, -0.5}, 1}, {{0.1, 0.1}, 1}});
    const std::vector<double> grid{-1, -0.5, 0, 0.5, 1};
    const std::vector<std::vector<double>> probes{{0, 0}, {-0.4, 0.7}, {0.3, -0.9}, {-0.8, -0.8}, {0.6, 0.2}};
    const double beta = 1.0;
    const auto exact = exact_averages(GridSpec{single_neuron(2), grid}, ts, beta, 0.0, probes);
    int inside = 0, total = 0;
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        RunConfig cfg = config_for(Mode::Gibbs, single_neuron(2), 20000, beta, seed);
        cfg.distribution = ParamDistribution::grid(grid);
        const auto ens = build(ts, cfg);
        for (std::size_t p = 0; p < probes.size(); ++p) {
            const auto est = evaluate(ens, probes[p]);
            inside += std::abs(est.value - exact[p]) <= 3 * est.std_error;
            ++total;
        }
    }
    CHECK(inside >= total * 9 / 10);
}

TEST_CASE("convergence curve") {
    const auto ts = testsupport::half_space(20, 7);
    const std::vector<std::vector<double>> probes{{0.5, 0.5}, {0.1, 0.9}, {0.29, 0.1}};
    const auto cfg = config_for(Mode::Gibbs, double_layer(2, 2), 1, 0.3, 3);

    SUBCASE("standard error shrinks like 1/sqrt(n)") {
        const std::vector<std::size_t> schedule{1000, 4000, 16000};
        const auto rows = convergence_curve(ts, cfg, schedule, probes);
        REQUIRE(rows.size() == schedule.size() * probes.size());
        for (std::size_t p = 0; p < probes.size(); ++p) {
            for (std::size_t s = 1; s < schedule.size(); ++s) {
                const double prev = rows[(s - 1) * probes.size() + p].estimate.std_error;
                const double cur = rows[s * probes.size() + p].estimate.std_error;
                REQUIRE(prev > 0.0);
                CHECK(cur / prev >= 0.35);
                CHECK(cur / prev <= 0.7);
            }
        }
        const std::vector<std::size_t> again{1000, 4000, 16000};
        const auto repeat = convergence_curve(ts, cfg, again, probes);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            CHECK(repeat[i].estimate.value == rows[i].estimate.value);
            CHECK(repeat[i].estimate.std_error == rows[i].estimate.std_error);
        }
    }
    SUBCASE("members that all agree give zero standard error") {
        const auto zcfg = config_for(Mode::ZeroError, single_neuron(2), 1, kInfiniteBeta, 3);
        const std::vector<std::vector<double>> train_points{ts[0].x, ts[1].x};
        const std::vector<std::size_t> schedule{5, 20};
        for (const auto& r : convergence_curve(ts, zcfg, schedule, train_points)) CHECK(r.estimate.std_error == 0.0);
    }
    SUBCASE("schedule checks") {
        CHECK_THROWS_AS(convergence_curve(ts, cfg, std::vector<std::size_t>{}, probes), ParameterError);
        CHECK_THROWS_AS(convergence_curve(ts, cfg, std::vector<std::size_t>{10, 10}, probes), ParameterError);
        CHECK_THROWS_AS(convergence_curve(ts, cfg, std::vector<std::size_t>{0, 10}, probes), ParameterError);
    }
}

TEST_CASE("reweighting: mass and mean energy") {
    const auto ts = testsupport::half_space(30, 9);
    RunConfig cfg(ArchitecturePool({{single_neuron(2, "a"), 1}, {double_layer(2, 2, "b"), 3}}));
    cfg.mode = Mode::MixedArch;
    cfg.n = 4000;
    cfg.beta = 0.0;
    cfg.master_seed = 5;
    const auto base = build(ts, cfg);

    const auto mass0 = architecture_mass(base);
    const double sigma = std::sqrt(0.25 / 4000);
    CHECK(std::abs(mass0[0] - 0.5) <= 3 * sigma);
    CHECK(std::abs(mass0[0] + mass0[1] - 1.0) <= 1e-12);

    double prev = mean_energy(base);
    for (double beta : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0, kInfiniteBeta}) {
        const auto e = mean_energy(reweight(base, beta));
        CHECK(e <= prev + 1e-12);
        prev = e;
    }
    CHECK(reweight(base, 3.0).members() == base.members());
}

TEST_CASE("ensemble invariants are enforced") {
    const auto arch = single_neuron(2);
    auto member = constant_member(true, 0);
    CHECK_THROWS_AS(GibbsEnsemble(Mode::Gibbs, 0.0, ExponentVariant::Displayed, 0, "", {arch}, {}, {}), ParameterError);
    CHECK_THROWS_AS(GibbsEnsemble(Mode::Gibbs, 0.0, ExponentVariant::Displayed, 0, "", {arch}, {member}, {0.5}),
                    ParameterError);
    CHECK_THROWS_AS(GibbsEnsemble(Mode::ZeroError, 1.0, ExponentVariant::Displayed, 0, "", {arch}, {member}, {1.0}),
                    ParameterError);
    auto wrong = member;
    wrong.errors = 2;
    CHECK_THROWS_AS(GibbsEnsemble(Mode::Gibbs, 0.0, ExponentVariant::Displayed, 0, "", {arch}, {wrong}, {1.0}),
                    ParameterError);
    wrong.energy = 2.0;
    CHECK_THROWS_AS(GibbsEnsemble(Mode::ZeroError, kInfiniteBeta, ExponentVariant::Displayed, 0, "", {arch}, {wrong},
                                  {1.0}),
                    ParameterError);
    auto orphan = member;
    orphan.params.architecture_id = "nope";
    CHECK_THROWS_AS(GibbsEnsemble(Mode::Gibbs, 0.0, ExponentVariant::Displayed, 0, "", {arch}, {orphan}, {1.0}),
                    ParameterError);
    CHECK_THROWS_AS(build(testsupport::xor_set(), config_for(Mode::Gibbs, single_neuron(3), 10, 1.0)), DimensionError);
}
