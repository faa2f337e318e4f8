#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <string>

#include "gibbsnet/data.hpp"
#include "gibbsnet/errors.hpp"
#include "gibbsnet/random.hpp"
#include "support.hpp"

using namespace gibbsnet;

namespace {

std::string load_error_message(const std::string& text) {
    try {
        parse_dataset(text);
    } catch (const LoadError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("load the XOR dataset") {
    const auto path = std::filesystem::temp_directory_path() / "gibbsnet_xor.csv";
    {
        std::ofstream f(path);
        f << "x1,x2,label\n0,0,0\n0,1,1\n1,0,1\n1,1,0\n";
    }
    const auto ts = load_dataset(path);
    CHECK(ts.input_dim() == 2);
    REQUIRE(ts.size() == 4);
    CHECK(ts[1].x == std::vector<double>{0, 1});
    CHECK(ts[1].label == 1);
    CHECK(ts[3].label == 0);
    CHECK(ts.positives() == 2);
    std::filesystem::remove(path);
}

TEST_CASE("load errors name the offending row") {
    const auto msg = load_error_message("x1,label\n0.1,0\n0.2,1\n0.3,2\n");
    CHECK(msg.find("row 3") != std::string::npos);
    CHECK(msg.find("label") != std::string::npos);

    const auto mixed = load_error_message("x1,x2,label\n0,0,0\n1,1\n");
    CHECK(mixed.find("row 2") != std::string::npos);
    CHECK(mixed.find("dimension") != std::string::npos);

    const auto conflict = load_error_message("x1,label\n0.5,1\n0.25,0\n0.5,0\n");
    CHECK(conflict.find("row 3") != std::string::npos);
    CHECK(conflict.find("row 1") != std::string::npos);

    CHECK_THROWS_AS(parse_dataset("x1,label\nabc,1\n"), LoadError);
    CHECK_THROWS_AS(parse_dataset("x1,label\nnan,1\n"), LoadError);
    CHECK_THROWS_AS(parse_dataset("x1,label\n1.5,1.0\n"), LoadError);
    CHECK_THROWS_AS(parse_dataset("a,b,label\n1,2,1\n"), LoadError);
    CHECK_THROWS_AS(parse_dataset("x1,x2\n1,2\n"), LoadError);
    CHECK_THROWS_AS(parse_dataset("x1,label\n"), LoadError);
    CHECK_THROWS_AS(parse_dataset(""), LoadError);
    CHECK_THROWS_AS(load_dataset("/nonexistent/nowhere.csv"), IoError);
}

TEST_CASE("identical duplicates with the same label are allowed") {
    const auto ts = parse_dataset("x1,label\r\n0.5,1\r\n0.5,1\r\n\r\n");
    CHECK(ts.size() == 2);
}

TEST_CASE("training set invariants") {
    CHECK_THROWS_AS(TrainingSet({}), ParameterError);
    CHECK_THROWS_AS(TrainingSet({{{0, 1}, 0}, {{1}, 1}}), DimensionError);
    CHECK_THROWS_AS(TrainingSet({{{0}, 3}}), DomainError);
    CHECK_THROWS_AS(TrainingSet({{{0}, 1}, {{0}, 0}}), ParameterError);
}

TEST_CASE("save/load round trip is bit exact") {
    Substream rng({123, 0}, StreamPurpose::Aux);
    std::vector<LabeledPoint> pts;
    for (int i = 0; i < 300; ++i) {
        // mixes awkward magnitudes: subnormal-ish, huge, negative, short decimals
        const double a = rng.normal() * std::pow(10.0, static_cast<int>(rng.below(40)) - 20);
        const double b = static_cast<double>(static_cast<int>(rng.below(2001)) - 1000) / 100.0;
        pts.push_back({{a, b, 1e-310 * i}, static_cast<int>(rng.below(2))});
    }
    const TrainingSet ts(pts);
    const auto text = format_dataset(ts);
    const auto back = parse_dataset(text);
    REQUIRE(back.size() == ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) CHECK(back[i] == ts[i]);
    CHECK(format_dataset(back) == text);
    CHECK(back.fingerprint() == ts.fingerprint());
}

TEST_CASE("fingerprint distinguishes datasets") {
    const auto a = parse_dataset("x1,label\n0,0\n1,1\n");
    const auto b = parse_dataset("x1,label\n0,0\n1,0\n");
    const auto c = parse_dataset("x1,label\n1,1\n0,0\n");
    CHECK(a.fingerprint() != b.fingerprint());
    CHECK(a.fingerprint() != c.fingerprint());
    CHECK(a.fingerprint().size() == 16);
}

TEST_CASE("holdout split") {
    const auto ts = testsupport::half_space(10, 1);
    const auto s = holdout_split(ts, 0.2, 7);
    CHECK(s.holdout.size() == 2);
    CHECK(s.train.size() == 8);

    const auto again = holdout_split(ts, 0.2, 7);
    CHECK(again.holdout.points() == s.holdout.points());
    CHECK(again.train.points() == s.train.points());

    CHECK_THROWS_AS(holdout_split(ts, 0.01, 7), ParameterError);
    CHECK_THROWS_AS(holdout_split(ts, 0.99, 7), ParameterError);
    CHECK_THROWS_AS(holdout_split(ts, 0.0, 7), ParameterError);
    CHECK_THROWS_AS(holdout_split(ts, 1.0, 7), ParameterError);
}

TEST_CASE("split parts reunite to the original multiset") {
    const auto ts = testsupport::half_space(57, 3);
    auto key = [](const LabeledPoint& p) { return std::pair{p.x, p.label}; };
    std::vector<std::pair<std::vector<double>, int>> original;
    for (const auto& p : ts) original.push_back(key(p));
    std::sort(original.begin(), original.end());
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        for (double frac : {0.1, 0.3, 0.5, 0.9}) {
            const auto s = holdout_split(ts, frac, seed);
            std::vector<std::pair<std::vector<double>, int>> joined;
            for (const auto& p : s.holdout) joined.push_back(key(p));
            for (const auto& p : s.train) joined.push_back(key(p));
            std::sort(joined.begin(), joined.end());
            CHECK(joined == original);
        }
    }
}

TEST_CASE("points files with and without a label column") {
    const auto a = parse_points("x1,x2\n0.5,1\n-2,3e-2\n");
    REQUIRE(a.size() == 2);
    CHECK(a[1] == std::vector<double>{-2, 0.03});
    const auto b = parse_points("x1,x2,label\n0.5,1,0\n");
    CHECK(b.front() == std::vector<double>{0.5, 1});
    CHECK_THROWS_AS(parse_points("x1,x2\n1\n"), LoadError);
}
