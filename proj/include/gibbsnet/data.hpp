#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace gibbsnet {

struct LabeledPoint {
    std::vector<double> x;
    int label = 0;

    bool operator==(const LabeledPoint&) const = default;
};

/// Non-empty, immutable set of binary-labelled points of one dimension.
///
/// Construction rejects mixed dimensions, non-finite coordinates, labels
/// other than 0/1, and identical points carrying different labels.
class TrainingSet {
public:
    explicit TrainingSet(std::vector<LabeledPoint> points);

    std::size_t input_dim() const noexcept { return input_dim_; }
    std::size_t size() const noexcept { return points_.size(); }
    const std::vector<LabeledPoint>& points() const noexcept { return points_; }
    const LabeledPoint& operator[](std::size_t i) const { return points_[i]; }
    auto begin() const noexcept { return points_.begin(); }
    auto end() const noexcept { return points_.end(); }

    std::size_t positives() const;

    /// FNV-1a over the dimension, coordinates (as IEEE bits) and labels, as 16 hex digits.
    std::string fingerprint() const;

private:
    std::vector<LabeledPoint> points_;
    std::size_t input_dim_ = 0;
};

TrainingSet load_dataset(const std::filesystem::path& path);
TrainingSet parse_dataset(const std::string& text);

void save_dataset(const TrainingSet& ts, const std::filesystem::path& path);
std::string format_dataset(const TrainingSet& ts);

/// Unlabelled probe points. A trailing `label` column, if present, is dropped.
std::vector<std::vector<double>> load_points(const std::filesystem::path& path);
std::vector<std::vector<double>> parse_points(const std::string& text);

struct Split {
    TrainingSet holdout;
    TrainingSet train;
};

/// Seeded shuffle, then the first round(fraction * size) points form the holdout part.
Split holdout_split(const TrainingSet& ts, double fraction, std::uint64_t seed);

/// Shortest decimal text that parses back to exactly `v`.
std::string format_real(double v);

}  // namespace gibbsnet
