#pragma once

#include <algorithm>
#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gpkl/discriminant.hpp"
#include "gpkl/errors.hpp"
#include "gpkl/gaussian.hpp"

namespace gpkl {

// CSV formats.
//
// Curve file (one group): first line holds the p grid times, every following
// line one curve of p values. Written by `simulate`, accepted by --x/--y.
//
// Labeled file (both groups): each line is "label,v1,...,vp". An optional
// first line starting with the literal token "label" is treated as a header.
// Grid times come from a separate grid file when given, otherwise indices
// 0..p-1 are used. By default the lexicographically smaller label becomes
// group X (the first KL argument).

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

inline std::string trim(const std::string& s) {
    auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return "";
    auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

inline double parse_number(const std::string& field, const std::string& path, long line) {
    const std::string t = trim(field);
    try {
        std::size_t pos = 0;
        const double v = std::stod(t, &pos);
        if (pos != t.size()) throw std::invalid_argument(t);
        return v;
    } catch (const std::exception&) {
        throw ParseError(path + ":" + std::to_string(line) + ": not a number: '" + t + "'",
                         line);
    }
}

inline std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        const std::string t = trim(line);
        if (!t.empty()) lines.push_back(t);
    }
    return lines;
}

inline std::string format_full(double v) {
    std::ostringstream out;
    out.precision(17);
    out << v;
    return out.str();
}

}  // namespace detail

/// Reads a curve file: grid-times header plus one curve per line.
inline SampleSet read_curves(const std::string& path,
                             std::optional<Grid> grid_override = std::nullopt) {
    const auto lines = detail::read_lines(path);
    if (lines.size() < 2)
        throw ParseError(path + ": need a grid-times line and at least one curve");
    const auto header = detail::split_csv_line(lines[0]);
    Eigen::VectorXd times(static_cast<Eigen::Index>(header.size()));
    for (std::size_t j = 0; j < header.size(); ++j)
        times[static_cast<Eigen::Index>(j)] = detail::parse_number(header[j], path, 1);
    Grid grid = grid_override ? *grid_override : Grid(times);
    if (grid.size() != times.size())
        throw ParseError(path + ": grid override size does not match file columns");

    const Eigen::Index p = grid.size();
    Eigen::MatrixXd rows(static_cast<Eigen::Index>(lines.size() - 1), p);
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto fields = detail::split_csv_line(lines[r]);
        if (static_cast<Eigen::Index>(fields.size()) != p)
            throw ParseError(path + ":" + std::to_string(r + 1) + ": expected " +
                                 std::to_string(p) + " values, got " +
                                 std::to_string(fields.size()),
                             static_cast<long>(r + 1));
        for (Eigen::Index j = 0; j < p; ++j)
            rows(static_cast<Eigen::Index>(r - 1), j) =
                detail::parse_number(fields[static_cast<std::size_t>(j)], path,
                                     static_cast<long>(r + 1));
    }
    return SampleSet(std::move(grid), std::move(rows));
}

/// Writes a curve file in the format read_curves accepts; full double
/// precision so the round trip is byte-stable.
inline void write_curves(const std::string& path, const SampleSet& samples) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    const Grid& grid = samples.grid();
    for (Eigen::Index j = 0; j < grid.size(); ++j)
        out << (j ? "," : "") << detail::format_full(grid.point(j));
    out << '\n';
    for (Eigen::Index i = 0; i < samples.count(); ++i) {
        for (Eigen::Index j = 0; j < grid.size(); ++j)
            out << (j ? "," : "") << detail::format_full(samples.rows()(i, j));
        out << '\n';
    }
}

/// Grid file: time points separated by commas and/or newlines.
inline Grid read_grid_file(const std::string& path) {
    const auto lines = detail::read_lines(path);
    std::vector<double> times;
    long lineno = 0;
    for (const auto& line : lines) {
        ++lineno;
        for (const auto& field : detail::split_csv_line(line))
            times.push_back(detail::parse_number(field, path, lineno));
    }
    Eigen::VectorXd pts(static_cast<Eigen::Index>(times.size()));
    for (std::size_t i = 0; i < times.size(); ++i) pts[static_cast<Eigen::Index>(i)] = times[i];
    return Grid(std::move(pts));
}

struct LabeledCsv {
    LabeledSamples samples;
    std::string label_x;  // the label mapped to group X
    std::string label_y;
};

/// Reads a labeled file. Exactly two distinct labels are required; the one
/// mapped to group X is `x_label` when given, otherwise the
/// lexicographically smaller of the two.
inline LabeledCsv read_labeled(const std::string& path,
                               std::optional<Grid> grid = std::nullopt,
                               std::optional<std::string> x_label = std::nullopt) {
    const auto lines = detail::read_lines(path);
    std::size_t first_row = 0;
    if (!lines.empty()) {
        auto fields = detail::split_csv_line(lines[0]);
        std::string head = detail::trim(fields.empty() ? "" : fields[0]);
        std::transform(head.begin(), head.end(), head.begin(),
                       [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
        if (head == "label") first_row = 1;
    }
    if (lines.size() <= first_row) throw ParseError(path + ": no data rows");

    std::vector<std::string> labels;
    std::vector<std::vector<double>> values;
    for (std::size_t r = first_row; r < lines.size(); ++r) {
        const long lineno = static_cast<long>(r + 1);
        const auto fields = detail::split_csv_line(lines[r]);
        if (fields.size() < 2)
            throw ParseError(path + ":" + std::to_string(lineno) +
                                 ": expected a label and at least one value",
                             lineno);
        labels.push_back(detail::trim(fields[0]));
        std::vector<double> row;
        row.reserve(fields.size() - 1);
        for (std::size_t j = 1; j < fields.size(); ++j)
            row.push_back(detail::parse_number(fields[j], path, lineno));
        if (!values.empty() && row.size() != values[0].size())
            throw ParseError(path + ":" + std::to_string(lineno) + ": expected " +
                                 std::to_string(values[0].size()) + " values, got " +
                                 std::to_string(row.size()),
                             lineno);
        values.push_back(std::move(row));
    }

    std::vector<std::string> distinct = labels;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() != 2)
        throw ParseError(path + ": expected exactly 2 distinct labels, found " +
                         std::to_string(distinct.size()));
    std::string lx = distinct[0], ly = distinct[1];
    if (x_label) {
        if (*x_label == ly) std::swap(lx, ly);
        else if (*x_label != lx)
            throw ParseError(path + ": label '" + *x_label + "' not present in file");
    }

    const auto p = static_cast<Eigen::Index>(values[0].size());
    Grid g = grid ? *grid : Grid::unit_spaced(p);
    if (g.size() != p) throw ParseError(path + ": grid size does not match value columns");
    Eigen::MatrixXd rows(static_cast<Eigen::Index>(values.size()), p);
    std::vector<Group> groups(values.size());
    for (std::size_t r = 0; r < values.size(); ++r) {
        for (Eigen::Index j = 0; j < p; ++j)
            rows(static_cast<Eigen::Index>(r), j) = values[r][static_cast<std::size_t>(j)];
        groups[r] = labels[r] == lx ? Group::X : Group::Y;
    }
    return {LabeledSamples(std::move(g), std::move(rows), std::move(groups)), lx, ly};
}

}  // namespace gpkl
