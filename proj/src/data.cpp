#include "gibbsnet/data.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "gibbsnet/errors.hpp"
#include "gibbsnet/random.hpp"

namespace gibbsnet {

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << text;
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

std::vector<std::string> split_line(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        std::string_view cell = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
        while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) cell.remove_prefix(1);
        while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t')) cell.remove_suffix(1);
        out.emplace_back(cell);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

struct Row {
    std::size_t line;
    std::vector<std::string> cells;
};

// Non-blank lines; the first is the header.
std::vector<Row> tokenize(const std::string& text) {
    std::vector<Row> rows;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string::npos) nl = text.size();
        std::string_view line(text.data() + pos, nl - pos);
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
        if (line.find_first_not_of(" \t") != std::string_view::npos) {
            rows.push_back({line_no, split_line(line)});
        }
        pos = nl + 1;
    }
    return rows;
}

std::string where(std::size_t row, std::size_t line) {
    return "row " + std::to_string(row) + " (line " + std::to_string(line) + ")";
}

double parse_real(const std::string& cell, std::size_t row, std::size_t line) {
    double v = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (cell.empty() || ec != std::errc() || ptr != last) {
        throw LoadError(where(row, line) + ": '" + cell + "' is not a decimal number");
    }
    if (!std::isfinite(v)) throw LoadError(where(row, line) + ": non-finite value '" + cell + "'");
    return v;
}

// Header must be x1..xN[,label].
std::size_t check_header(const Row& header, bool labelled) {
    const auto& h = header.cells;
    const std::size_t dim = labelled ? h.size() - 1 : h.size();
    if (h.empty() || dim == 0 || (labelled && h.back() != "label")) {
        throw LoadError("header (line " + std::to_string(header.line) +
                        ") must be x1,...,xN" + (labelled ? ",label" : ""));
    }
    for (std::size_t i = 0; i < dim; ++i) {
        if (h[i] != "x" + std::to_string(i + 1)) {
            throw LoadError("header column " + std::to_string(i + 1) + " must be 'x" +
                            std::to_string(i + 1) + "', got '" + h[i] + "'");
        }
    }
    return dim;
}

}  // namespace

TrainingSet::TrainingSet(std::vector<LabeledPoint> points) : points_(std::move(points)) {
    if (points_.empty()) throw ParameterError("training set must contain at least one point");
    input_dim_ = points_.front().x.size();
    if (input_dim_ == 0) throw DimensionError("training points must have at least one coordinate");
    std::map<std::vector<double>, int> seen;
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const auto& p = points_[i];
        if (p.x.size() != input_dim_) {
            throw DimensionError("point " + std::to_string(i + 1) + " has dimension " +
                                 std::to_string(p.x.size()) + ", expected " + std::to_string(input_dim_));
        }
        for (double v : p.x) {
            if (!std::isfinite(v)) throw DomainError("point " + std::to_string(i + 1) + " has a non-finite coordinate");
        }
        if (p.label != 0 && p.label != 1) {
            throw DomainError("point " + std::to_string(i + 1) + " has label " + std::to_string(p.label));
        }
        auto [it, inserted] = seen.emplace(p.x, p.label);
        if (!inserted && it->second != p.label) {
            throw ParameterError("point " + std::to_string(i + 1) + " duplicates an earlier point with the opposite label");
        }
    }
}

std::size_t TrainingSet::positives() const {
    return static_cast<std::size_t>(
        std::count_if(points_.begin(), points_.end(), [](const auto& p) { return p.label == 1; }));
}

std::string TrainingSet::fingerprint() const {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xFF;
            h *= 1099511628211ULL;
        }
    };
    mix(input_dim_);
    mix(points_.size());
    for (const auto& p : points_) {
        for (double v : p.x) mix(std::bit_cast<std::uint64_t>(v));
        mix(static_cast<std::uint64_t>(p.label));
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

TrainingSet parse_dataset(const std::string& text) {
    const auto rows = tokenize(text);
    if (rows.empty()) throw LoadError("dataset is empty (no header)");
    const std::size_t dim = check_header(rows.front(), true);
    if (rows.size() == 1) throw LoadError("dataset has a header but no rows");

    std::vector<LabeledPoint> points;
    points.reserve(rows.size() - 1);
    std::map<std::vector<double>, std::pair<int, std::size_t>> seen;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.cells.size() != dim + 1) {
            throw LoadError(where(r, row.line) + ": expected " + std::to_string(dim + 1) +
                            " columns, got " + std::to_string(row.cells.size()) +
                            " (inconsistent dimension)");
        }
        LabeledPoint p;
        p.x.reserve(dim);
        for (std::size_t i = 0; i < dim; ++i) p.x.push_back(parse_real(row.cells[i], r, row.line));
        const auto& lab = row.cells.back();
        if (lab != "0" && lab != "1") {
            throw LoadError(where(r, row.line) + ": label must be 0 or 1, got '" + lab + "'");
        }
        p.label = lab == "1" ? 1 : 0;
        auto [it, inserted] = seen.emplace(p.x, std::pair{p.label, r});
        if (!inserted && it->second.first != p.label) {
            throw LoadError(where(r, row.line) + ": same point as row " +
                            std::to_string(it->second.second) + " with a conflicting label");
        }
        points.push_back(std::move(p));
    }
    return TrainingSet(std::move(points));
}

TrainingSet load_dataset(const std::filesystem::path& path) { return parse_dataset(read_file(path)); }

std::string format_real(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string format_dataset(const TrainingSet& ts) {
    std::string out;
    for (std::size_t i = 1; i <= ts.input_dim(); ++i) out += "x" + std::to_string(i) + ",";
    out += "label\n";
    for (const auto& p : ts) {
        for (double v : p.x) out += format_real(v) + ",";
        out += p.label ? "1\n" : "0\n";
    }
    return out;
}

void save_dataset(const TrainingSet& ts, const std::filesystem::path& path) {
    write_file(path, format_dataset(ts));
}

std::vector<std::vector<double>> parse_points(const std::string& text) {
    const auto rows = tokenize(text);
    if (rows.empty()) throw LoadError("points file is empty (no header)");
    const bool labelled = !rows.front().cells.empty() && rows.front().cells.back() == "label";
    const std::size_t dim = check_header(rows.front(), labelled);
    const std::size_t width = labelled ? dim + 1 : dim;
    std::vector<std::vector<double>> out;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.cells.size() != width) {
            throw LoadError(where(r, row.line) + ": expected " + std::to_string(width) + " columns, got " +
                            std::to_string(row.cells.size()));
        }
        std::vector<double> x;
        x.reserve(dim);
        for (std::size_t i = 0; i < dim; ++i) x.push_back(parse_real(row.cells[i], r, row.line));
        out.push_back(std::move(x));
    }
    return out;
}

std::vector<std::vector<double>> load_points(const std::filesystem::path& path) {
    return parse_points(read_file(path));
}

Split holdout_split(const TrainingSet& ts, double fraction, std::uint64_t seed) {
    if (!(fraction > 0.0 && fraction < 1.0)) {
        throw ParameterError("holdout fraction must lie in (0,1)");
    }
    const auto n = ts.size();
    const auto k = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
    if (k == 0 || k >= n) {
        throw ParameterError("holdout fraction " + format_real(fraction) + " of " + std::to_string(n) +
                             " points leaves an empty part");
    }
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    Substream rng(SeedSpec{seed, 0}, StreamPurpose::Split);
    for (std::size_t i = n - 1; i > 0; --i) {
        const auto j = static_cast<std::size_t>(rng.below(i + 1));
        std::swap(order[i], order[j]);
    }
    std::vector<LabeledPoint> hold, train;
    for (std::size_t i = 0; i < n; ++i) (i < k ? hold : train).push_back(ts[order[i]]);
    return Split{TrainingSet(std::move(hold)), TrainingSet(std::move(train))};
}

}  // namespace gibbsnet
