#pragma once

#include <cmath>
#include <vector>

#include "gpkl/errors.hpp"
#include "gpkl/grid.hpp"

namespace gpkl {

/// A contiguous index range [start, start+size) on a grid. The ball view of
/// the window (center time, radius) is derived against the grid it lives on.
struct Window {
    Eigen::Index start = 0;
    Eigen::Index size = 1;

    Eigen::Index end() const { return start + size; }  // exclusive
    bool contains(Eigen::Index i) const { return i >= start && i < end(); }
    bool overlaps(const Window& o) const { return start < o.end() && o.start < end(); }

    double start_time(const Grid& g) const { return g.point(start); }
    double end_time(const Grid& g) const { return g.point(end() - 1); }
    double center_time(const Grid& g) const { return 0.5 * (start_time(g) + end_time(g)); }
    double radius(const Grid& g) const { return 0.5 * (end_time(g) - start_time(g)); }
    double length(const Grid& g) const { return end_time(g) - start_time(g); }

    bool operator==(const Window&) const = default;
};

inline void validate_window(const Window& w, const Grid& grid) {
    if (w.start < 0 || w.size < 1 || w.end() > grid.size())
        throw IndexError("window [" + std::to_string(w.start) + ", " +
                         std::to_string(w.end()) + ") outside grid of size " +
                         std::to_string(grid.size()));
}

/// Largest window size k with (k-1) * spacing <= c * extent, i.e.
/// k = floor(c * (p - 1)) + 1, clamped to p. Uses the grid extent so the
/// count of candidate windows is pure index arithmetic (p=100 gives 91
/// windows at c=0.1 and 11 at c=0.9).
inline Eigen::Index max_window_size(double c, const Grid& grid) {
    if (!(c > 0.0) || c > 1.0) throw ParameterError("c must be in (0, 1]");
    const auto p = grid.size();
    const auto k = static_cast<Eigen::Index>(
                       std::floor(c * static_cast<double>(p - 1) + 1e-9)) + 1;
    return std::min(k, p);
}

/// All candidate windows under the length constraint. With maximal_only
/// (the default) only windows of exactly the maximal size, ordered by start;
/// otherwise every size from the maximum down to 1, each block ordered by
/// start.
inline std::vector<Window> enumerate_windows(double c, const Grid& grid,
                                             bool maximal_only = true) {
    const Eigen::Index k = max_window_size(c, grid);
    const Eigen::Index p = grid.size();
    std::vector<Window> out;
    const Eigen::Index lo = maximal_only ? k : 1;
    for (Eigen::Index size = k; size >= lo; --size)
        for (Eigen::Index start = 0; start + size <= p; ++start)
            out.push_back({start, size});
    return out;
}

}  // namespace gpkl
