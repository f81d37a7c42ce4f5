#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "gpkl/errors.hpp"
#include "gpkl/gaussian.hpp"
#include "gpkl/parallel.hpp"
#include "gpkl/rng.hpp"
#include "gpkl/select.hpp"

namespace gpkl {

/// Empirical quantile with linear interpolation between order statistics
/// (R type-7 convention). `sorted` must be ascending.
inline double quantile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) throw ParameterError("quantile of empty data");
    if (q <= 0.0) return sorted.front();
    if (q >= 1.0) return sorted.back();
    const double h = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(h);
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

struct BootstrapOptions {
    SelectOptions select;
    bool jitter = false;        // add a ridge after shrinkage
    double jitter_delta = 0.0;  // 0 = per-matrix default (1e-8 trace/p)
    unsigned threads = 0;       // 0 = hardware concurrency
    /// Test hook: replaces the with-replacement row draw. Receives the
    /// replicate rng and the group size, returns the resampled row indices.
    std::function<std::vector<Eigen::Index>(Rng&, Eigen::Index)> resample_hook;
};

/// Bootstrap distribution of the selected-interval center. `centers` holds
/// one center time per successful replicate, in replicate order.
struct BootstrapResult {
    Grid grid = Grid::unit_spaced(2);
    Window point_estimate;
    double point_center = 0.0;
    double radius = 0.0;  // r_c taken from the point estimate's window
    std::vector<double> centers;
    double c = 0.0;
    int B = 0;
    std::uint64_t seed = 0;
    double eta = 1.0;
    int failures = 0;
};

namespace detail {

inline GaussianParams prepare_params(const SampleSet& samples, double eta, bool jitter,
                                     double jitter_delta) {
    GaussianParams params = shrink_covariance(estimate_params(samples), eta);
    if (jitter) params = add_jitter(params, jitter_delta);
    return params;
}

}  // namespace detail

/// Nonparametric bootstrap of the interval-center estimator. Each replicate
/// resamples the X and Y rows independently with replacement (group sizes
/// preserved), re-runs the estimate -> shrink -> select pipeline, and
/// records the selected window's center time. Replicates draw from RNG
/// streams derived from (seed, replicate), so parallel and serial runs
/// produce bit-identical results. Replicates whose covariances fail
/// Cholesky are counted as failures; more than 10% failures is an error.
inline BootstrapResult bootstrap_centers(const SampleSet& dx, const SampleSet& dy, double c,
                                         int B, std::uint64_t seed, double eta,
                                         const BootstrapOptions& opts = {}) {
    if (B < 1) throw ParameterError("B must be >= 1");
    if (dx.count() < 2 || dy.count() < 2)
        throw ParameterError("bootstrap needs at least 2 curves per group");
    if (!dx.grid().same_as(dy.grid()))
        throw ShapeError("sample sets must share the same grid");

    BootstrapResult result;
    result.grid = dx.grid();
    result.c = c;
    result.B = B;
    result.seed = seed;
    result.eta = eta;

    const GaussianParams px = detail::prepare_params(dx, eta, opts.jitter, opts.jitter_delta);
    const GaussianParams py = detail::prepare_params(dy, eta, opts.jitter, opts.jitter_delta);
    const SelectionResult point = select_interval(px, py, c, opts.select);
    result.point_estimate = point.window;
    result.point_center = point.window.center_time(result.grid);
    result.radius = point.window.radius(result.grid);

    std::vector<double> centers(static_cast<std::size_t>(B));
    std::vector<char> ok(static_cast<std::size_t>(B), 0);
    detail::parallel_for(
        static_cast<std::size_t>(B),
        [&](std::size_t b) {
            Rng rng = derive_rng(seed, static_cast<std::uint64_t>(b));
            const std::vector<Eigen::Index> ix =
                opts.resample_hook ? opts.resample_hook(rng, dx.count())
                                   : rng.sample_with_replacement(dx.count());
            const std::vector<Eigen::Index> iy =
                opts.resample_hook ? opts.resample_hook(rng, dy.count())
                                   : rng.sample_with_replacement(dy.count());
            try {
                const GaussianParams bx =
                    detail::prepare_params(dx.resampled(ix), eta, opts.jitter, opts.jitter_delta);
                const GaussianParams by =
                    detail::prepare_params(dy.resampled(iy), eta, opts.jitter, opts.jitter_delta);
                const SelectionResult sel = select_interval(bx, by, c, opts.select);
                centers[b] = sel.window.center_time(result.grid);
                ok[b] = 1;
            } catch (const SingularMatrixError&) {
            } catch (const NumericError&) {
            }
        },
        opts.threads);

    for (std::size_t b = 0; b < centers.size(); ++b) {
        if (ok[b])
            result.centers.push_back(centers[b]);
        else
            ++result.failures;
    }
    if (result.failures * 10 > B)
        throw NumericError("bootstrap: " + std::to_string(result.failures) + " of " +
                           std::to_string(B) +
                           " replicates failed (non-PD covariance); "
                           "use shrinkage (eta < 1) or jitter");
    return result;
}

/// Percentile confidence interval for the interval center: the alpha/2 and
/// 1 - alpha/2 empirical quantiles of the bootstrap centers.
inline std::pair<double, double> ci_center(const BootstrapResult& result, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("alpha must be in (0, 1)");
    if (result.centers.empty())
        throw NumericError("no successful bootstrap replicates; cannot form a CI");
    std::vector<double> sorted = result.centers;
    std::sort(sorted.begin(), sorted.end());
    return {quantile_sorted(sorted, alpha / 2.0), quantile_sorted(sorted, 1.0 - alpha / 2.0)};
}

/// Confidence set for the interval: the union of balls B(t, r_c) over the
/// center CI collapses to the single interval [ci_lo - r_c, ci_hi + r_c],
/// clipped to the grid's time extent.
inline std::pair<double, double> confidence_set(const BootstrapResult& result, double alpha) {
    const auto [lo, hi] = ci_center(result, alpha);
    const double t0 = result.grid.point(0);
    const double t1 = result.grid.point(result.grid.size() - 1);
    return {std::max(lo - result.radius, t0), std::min(hi + result.radius, t1)};
}

}  // namespace gpkl
