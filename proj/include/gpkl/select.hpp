#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "gpkl/divergence.hpp"
#include "gpkl/errors.hpp"
#include "gpkl/gaussian.hpp"
#include "gpkl/window.hpp"

namespace gpkl {

/// Knobs shared by the window search operations. Directed KL(X||Y) is the
/// default; symmetrized KL is opt-in. By default only maximal-size windows
/// are searched (the profile and the interval counts are defined on those);
/// maximal_only = false enumerates every admissible size.
struct SelectOptions {
    bool maximal_only = true;
    bool symmetrized = false;
};

struct SelectionResult {
    Window window;
    KLValue value;
};

/// Local KL value for every maximal window, indexed by window center.
struct KLProfile {
    std::vector<Window> windows;
    std::vector<double> values;
    std::size_t argmax_index = 0;
};

namespace detail {

inline double evaluate_window(const GaussianParams& x, const GaussianParams& y,
                              const Window& w, bool symmetrized) {
    try {
        return symmetrized ? kl_symmetrized(x, y, w).value : kl_local(x, y, w).value;
    } catch (const SingularMatrixError& e) {
        throw SingularMatrixError("window [" + std::to_string(w.start) + ", " +
                                      std::to_string(w.end()) + "): " + e.what(),
                                  e.leading_minor());
    }
}

/// Index of the maximum; exact ties go to the smallest start index.
inline std::size_t argmax_windows(const std::vector<Window>& windows,
                                  const std::vector<double>& values) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < windows.size(); ++i) {
        if (values[i] > values[best] ||
            (values[i] == values[best] && windows[i].start < windows[best].start))
            best = i;
    }
    return best;
}

}  // namespace detail

/// Exhaustive search for the window of maximal local KL divergence under the
/// length constraint. All candidate windows are evaluated; ties are broken
/// by the smallest start index. Any window whose covariance fails Cholesky
/// aborts the search with an error naming the window (shrinkage or jitter is
/// the remedy).
inline SelectionResult select_interval(const GaussianParams& x, const GaussianParams& y,
                                       double c, const SelectOptions& opts = {}) {
    if (!x.grid().same_as(y.grid()))
        throw ShapeError("x and y must share the same grid");
    const std::vector<Window> windows = enumerate_windows(c, x.grid(), opts.maximal_only);
    std::vector<double> values(windows.size());
    for (std::size_t i = 0; i < windows.size(); ++i)
        values[i] = detail::evaluate_window(x, y, windows[i], opts.symmetrized);
    const std::size_t best = detail::argmax_windows(windows, values);
    return {windows[best], {values[best], windows[best]}};
}

/// KL value for every maximal window. The argmax matches select_interval
/// under the default maximal-only search.
inline KLProfile kl_profile(const GaussianParams& x, const GaussianParams& y, double c,
                            const SelectOptions& opts = {}) {
    if (!x.grid().same_as(y.grid()))
        throw ShapeError("x and y must share the same grid");
    KLProfile profile;
    profile.windows = enumerate_windows(c, x.grid(), /*maximal_only=*/true);
    profile.values.resize(profile.windows.size());
    for (std::size_t i = 0; i < profile.windows.size(); ++i)
        profile.values[i] =
            detail::evaluate_window(x, y, profile.windows[i], opts.symmetrized);
    profile.argmax_index = detail::argmax_windows(profile.windows, profile.values);
    return profile;
}

struct SequentialResult {
    std::vector<SelectionResult> intervals;
    bool stopped_early = false;  // no disjoint candidate of the required size remained
};

/// Greedy multi-interval selection: repeatedly pick the best window among
/// candidates disjoint from everything already selected. Attained values are
/// non-increasing. Stops early (flagged in the result) when no disjoint
/// candidate remains.
inline SequentialResult sequential_select(const GaussianParams& x, const GaussianParams& y,
                                          double c, int num_intervals,
                                          const SelectOptions& opts = {}) {
    if (num_intervals < 1) throw ParameterError("num_intervals must be >= 1");
    if (!x.grid().same_as(y.grid()))
        throw ShapeError("x and y must share the same grid");
    const std::vector<Window> windows = enumerate_windows(c, x.grid(), opts.maximal_only);
    std::vector<double> values(windows.size(),
                               -std::numeric_limits<double>::infinity());
    std::vector<bool> evaluated(windows.size(), false);

    SequentialResult result;
    for (int round = 0; round < num_intervals; ++round) {
        bool found = false;
        std::size_t best = 0;
        for (std::size_t i = 0; i < windows.size(); ++i) {
            bool disjoint = true;
            for (const auto& sel : result.intervals)
                if (windows[i].overlaps(sel.window)) { disjoint = false; break; }
            if (!disjoint) continue;
            if (!evaluated[i]) {
                values[i] = detail::evaluate_window(x, y, windows[i], opts.symmetrized);
                evaluated[i] = true;
            }
            if (!found || values[i] > values[best] ||
                (values[i] == values[best] && windows[i].start < windows[best].start)) {
                best = i;
                found = true;
            }
        }
        if (!found) {
            result.stopped_early = true;
            break;
        }
        result.intervals.push_back({windows[best], {values[best], windows[best]}});
    }
    return result;
}

}  // namespace gpkl
