#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "gpkl/bootstrap.hpp"
#include "gpkl/jaccard.hpp"
#include "gpkl/parallel.hpp"
#include "gpkl/rng.hpp"
#include "gpkl/simulate.hpp"

namespace gpkl {

/// Uniform c grid {0.05, 0.10, ..., 0.95} used by the AIJD integral.
inline std::vector<double> default_c_grid() {
    std::vector<double> grid;
    for (int i = 1; i <= 19; ++i) grid.push_back(0.05 * i);
    return grid;
}

struct AijdOptions {
    double eta = kDefaultStudyEta;
    SelectOptions select;
    /// Test hook: when set, replaces the estimate -> select pipeline and
    /// returns the "estimated" window directly for each c.
    std::function<Window(double)> estimate_hook;
};

namespace detail {

inline void validate_c_grid(const std::vector<double>& c_grid) {
    if (c_grid.size() < 2) throw ParameterError("c grid needs at least 2 points");
    const double h = c_grid[1] - c_grid[0];
    if (!(h > 0.0)) throw ParameterError("c grid must be increasing");
    for (std::size_t i = 0; i + 1 < c_grid.size(); ++i) {
        if (std::abs((c_grid[i + 1] - c_grid[i]) - h) > 1e-9)
            throw ParameterError("c grid must be uniform");
        if (!(c_grid[i] > 0.0 && c_grid[i + 1] < 1.0))
            throw ParameterError("c grid must lie within (0, 1)");
    }
}

/// Trapezoidal mean of values over a uniform grid (integral normalized by
/// the grid extent); stays in [0, 1] for values in [0, 1].
inline double trapezoid_mean(const std::vector<double>& values) {
    const auto n = values.size();
    double sum = 0.5 * (values.front() + values.back());
    for (std::size_t i = 1; i + 1 < n; ++i) sum += values[i];
    return sum / static_cast<double>(n - 1);
}

}  // namespace detail

/// Integrated Jaccard distance for one simulated dataset: draw (dx, dy) from
/// the scenario with the given seed, estimate the interval for every c on
/// the grid, and integrate the Jaccard distance to the population interval
/// with the trapezoidal rule. `truth` must hold the population window per c
/// (see true_interval); the Monte Carlo expectation over replicates is taken
/// by monte_carlo_run.
inline double aijd(const ScenarioSpec& spec, Eigen::Index n, Eigen::Index m,
                   const std::vector<double>& c_grid,
                   const std::map<double, Window>& truth, const AijdOptions& opts = {}) {
    detail::validate_c_grid(c_grid);
    std::vector<double> distances;
    distances.reserve(c_grid.size());
    if (opts.estimate_hook) {
        for (double c : c_grid)
            distances.push_back(jaccard_distance(opts.estimate_hook(c), truth.at(c)));
        return detail::trapezoid_mean(distances);
    }
    auto [dx, dy] = sample_scenario(spec, n, m);
    const GaussianParams px = shrink_covariance(estimate_params(dx), opts.eta);
    const GaussianParams py = shrink_covariance(estimate_params(dy), opts.eta);
    for (double c : c_grid) {
        const Window estimated = select_interval(px, py, c, opts.select).window;
        distances.push_back(jaccard_distance(estimated, truth.at(c)));
    }
    return detail::trapezoid_mean(distances);
}

/// Convenience overload computing the population windows itself.
inline double aijd(const ScenarioSpec& spec, Eigen::Index n, Eigen::Index m,
                   const std::vector<double>& c_grid, const AijdOptions& opts = {}) {
    detail::validate_c_grid(c_grid);
    std::map<double, Window> truth;
    for (double c : c_grid) truth[c] = true_interval(spec, c, opts.eta, opts.select);
    return aijd(spec, n, m, c_grid, truth, opts);
}

struct AijdRow {
    Scenario scenario;
    Eigen::Index n = 0;
    Eigen::Index p = 0;
    int replicate = 0;
    double aijd = 0.0;
    bool failed = false;
};

struct AijdSummary {
    Scenario scenario;
    Eigen::Index n = 0;
    Eigen::Index p = 0;
    double q1 = 0.0, median = 0.0, q3 = 0.0, mean = 0.0;
    int failures = 0;
};

struct MonteCarloReport {
    std::vector<AijdRow> rows;

    /// CSV with the fixed header "scenario,n,p,replicate,aijd".
    std::string to_csv() const {
        std::ostringstream out;
        out.precision(17);
        out << "scenario,n,p,replicate,aijd\n";
        for (const AijdRow& r : rows) {
            if (r.failed) continue;
            out << scenario_name(r.scenario) << ',' << r.n << ',' << r.p << ','
                << r.replicate << ',' << r.aijd << '\n';
        }
        return out.str();
    }

    std::vector<AijdSummary> summaries() const {
        std::vector<AijdSummary> out;
        for (const AijdRow& r : rows) {
            auto it = std::find_if(out.begin(), out.end(), [&](const AijdSummary& s) {
                return s.scenario == r.scenario && s.n == r.n && s.p == r.p;
            });
            if (it == out.end()) {
                out.push_back({r.scenario, r.n, r.p, 0, 0, 0, 0, 0});
                it = out.end() - 1;
            }
            if (r.failed) ++it->failures;
        }
        for (AijdSummary& s : out) {
            std::vector<double> vals;
            for (const AijdRow& r : rows)
                if (!r.failed && r.scenario == s.scenario && r.n == s.n && r.p == s.p)
                    vals.push_back(r.aijd);
            std::sort(vals.begin(), vals.end());
            if (vals.empty()) continue;
            double sum = 0.0;
            for (double v : vals) sum += v;
            s.q1 = quantile_sorted(vals, 0.25);
            s.median = quantile_sorted(vals, 0.5);
            s.q3 = quantile_sorted(vals, 0.75);
            s.mean = sum / static_cast<double>(vals.size());
        }
        return out;
    }
};

struct MonteCarloOptions {
    double eta = kDefaultStudyEta;
    SelectOptions select;
    unsigned threads = 0;
};

/// Monte Carlo consistency study: M replicates of the AIJD per (scenario, n,
/// p) cell. Population windows are computed once per (scenario, p);
/// replicate seeds derive from (seed, scenario, n, p, replicate), so the
/// report is schedule-independent. Failed replicates (non-PD covariance) are
/// flagged, not fatal.
inline MonteCarloReport monte_carlo_run(const std::vector<Scenario>& scenarios,
                                        const std::vector<Eigen::Index>& n_list,
                                        const std::vector<Eigen::Index>& p_list, int M,
                                        const std::vector<double>& c_grid, std::uint64_t seed,
                                        const MonteCarloOptions& opts = {}) {
    if (M < 1) throw ParameterError("M must be >= 1");
    detail::validate_c_grid(c_grid);
    MonteCarloReport report;
    for (Scenario scenario : scenarios) {
        for (Eigen::Index p : p_list) {
            const ScenarioSpec base = ScenarioSpec::make(scenario, p, seed);
            std::map<double, Window> truth;
            for (double c : c_grid)
                truth[c] = true_interval(base, c, opts.eta, opts.select);
            for (Eigen::Index n : n_list) {
                std::vector<AijdRow> cell(static_cast<std::size_t>(M));
                detail::parallel_for(
                    static_cast<std::size_t>(M),
                    [&](std::size_t rep) {
                        ScenarioSpec spec = base;
                        spec.seed = stream_id({seed, static_cast<std::uint64_t>(scenario),
                                               static_cast<std::uint64_t>(n),
                                               static_cast<std::uint64_t>(p),
                                               static_cast<std::uint64_t>(rep)});
                        AijdRow row{scenario, n, p, static_cast<int>(rep), 0.0, false};
                        AijdOptions aopts;
                        aopts.eta = opts.eta;
                        aopts.select = opts.select;
                        try {
                            row.aijd = aijd(spec, n, n, c_grid, truth, aopts);
                        } catch (const SingularMatrixError&) {
                            row.failed = true;
                        } catch (const NumericError&) {
                            row.failed = true;
                        }
                        cell[rep] = row;
                    },
                    opts.threads);
                report.rows.insert(report.rows.end(), cell.begin(), cell.end());
            }
        }
    }
    return report;
}

struct TimingRow {
    Scenario scenario;
    Eigen::Index n = 0;
    Eigen::Index p = 0;
    double c = 0.0;
    double seconds = 0.0;  // mean select_interval wall time over the runs
};

struct TimingReport {
    std::vector<TimingRow> rows;

    /// CSV with the fixed header "scenario,n,p,c,seconds".
    std::string to_csv() const {
        std::ostringstream out;
        out.precision(17);
        out << "scenario,n,p,c,seconds\n";
        for (const TimingRow& r : rows)
            out << scenario_name(r.scenario) << ',' << r.n << ',' << r.p << ',' << r.c << ','
                << r.seconds << '\n';
        return out.str();
    }
};

/// Wall-clock cost of select_interval per c (estimation excluded), averaged
/// over `runs` repetitions on one seeded dataset.
inline TimingReport timing_benchmark(const ScenarioSpec& spec, Eigen::Index n, Eigen::Index p,
                                     const std::vector<double>& c_list, int runs = 5,
                                     double eta = kDefaultStudyEta,
                                     const SelectOptions& select = {}) {
    if (runs < 1) throw ParameterError("runs must be >= 1");
    ScenarioSpec sized = spec;
    sized.grid = ScenarioSpec::default_grid(p);
    auto [dx, dy] = sample_scenario(sized, n, n);
    const GaussianParams px = shrink_covariance(estimate_params(dx), eta);
    const GaussianParams py = shrink_covariance(estimate_params(dy), eta);
    TimingReport report;
    for (double c : c_list) {
        double total = 0.0;
        for (int r = 0; r < runs; ++r) {
            const auto start = std::chrono::steady_clock::now();
            (void)select_interval(px, py, c, select);
            const auto stop = std::chrono::steady_clock::now();
            total += std::chrono::duration<double>(stop - start).count();
        }
        report.rows.push_back({sized.scenario, n, p, c, total / runs});
    }
    return report;
}

}  // namespace gpkl
