#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

#include <Eigen/Core>

#include "gpkl/errors.hpp"
#include "gpkl/gaussian.hpp"
#include "gpkl/rng.hpp"
#include "gpkl/select.hpp"

namespace gpkl {

/// Shrinkage applied by default on the population side of the simulation
/// studies. The generative models below are 9-function basis expansions, so
/// their exact covariance matrices have rank <= 9 (<= 18 for the X side of
/// scenarios B/C); windows wider than the rank are singular without
/// shrinkage.
inline constexpr double kDefaultStudyEta = 0.9;

enum class Scenario { A, B, C };

inline const char* scenario_name(Scenario s) {
    switch (s) {
        case Scenario::A: return "A";
        case Scenario::B: return "B";
        default: return "C";
    }
}

/// Fourier basis on [0, pi], ordered constant, sin, cos:
///   phi_1(t) = 1/sqrt(pi),
///   phi_{2j}(t) = sqrt(2/pi) sin(2 j t),  phi_{2j+1}(t) = sqrt(2/pi) cos(2 j t).
/// Orthonormal on [0, pi]. The convention lives here alone; swapping it is a
/// one-line change.
inline Eigen::VectorXd fourier_basis(double t, int count = 9) {
    const double lambda = std::numbers::pi;
    Eigen::VectorXd out(count);
    out[0] = 1.0 / std::sqrt(lambda);
    const double amp = std::sqrt(2.0 / lambda);
    for (int i = 2; i <= count; ++i) {
        const int j = i / 2;
        const double arg = 2.0 * std::numbers::pi * static_cast<double>(j) * t / lambda;
        out[i - 1] = amp * (i % 2 == 0 ? std::sin(arg) : std::cos(arg));
    }
    return out;
}

/// p x count matrix of basis values over the grid.
inline Eigen::MatrixXd fourier_design(const Grid& grid, int count = 9) {
    Eigen::MatrixXd design(grid.size(), count);
    for (Eigen::Index i = 0; i < grid.size(); ++i)
        design.row(i) = fourier_basis(grid.point(i), count).transpose();
    return design;
}

/// Generative description of the three simulation scenarios. Curves are
/// coefficient expansions over the first 9 Fourier basis functions:
///   X(t) = (beta_x + eps [+ gamma * exp(-(t - bump_center)^2)])^T Phi(t)
/// with eps ~ N(0, eps_var I) per curve and gamma ~ N(0, tau2 I) on the X
/// side of scenarios B and C only. Scenario A differs in the means
/// (beta_x != beta_y, no bump), B in the covariance (common beta, bump on
/// X), C in both.
struct ScenarioSpec {
    Scenario scenario = Scenario::A;
    Eigen::VectorXd beta_x;
    Eigen::VectorXd beta_y;
    double eps_var = 0.25;
    double tau2 = 1.0;
    double bump_center = 3.0 * std::numbers::pi / 4.0;
    Grid grid = Grid::unit_spaced(2);
    std::uint64_t seed = 0;

    bool bump_on_x() const { return scenario != Scenario::A; }

    /// Simulation grid: p points l*pi/p spanning [0, pi), domain length pi.
    static Grid default_grid(Eigen::Index p) {
        return Grid::uniform(p, 0.0, std::numbers::pi / static_cast<double>(p),
                             std::numbers::pi);
    }

    static ScenarioSpec make(Scenario scenario, Eigen::Index p, std::uint64_t seed) {
        ScenarioSpec spec;
        spec.scenario = scenario;
        spec.beta_x = Eigen::VectorXd(9);
        spec.beta_x << 1, -2, -1, 1, 2, -1, 2, 3, -0.5;
        spec.beta_y = Eigen::VectorXd(9);
        if (scenario == Scenario::B)
            spec.beta_y = spec.beta_x;
        else
            spec.beta_y << -1, -2, -1, 1, 2, -1, 2, 5, -0.5;
        spec.grid = default_grid(p);
        spec.seed = seed;
        return spec;
    }

    void validate() const {
        if (beta_x.size() != 9 || beta_y.size() != 9)
            throw ParameterError("beta vectors must have length 9");
        if (!(eps_var > 0.0)) throw ParameterError("eps_var must be positive");
        if (tau2 < 0.0) throw ParameterError("tau2 must be non-negative");
    }
};

/// Draws n X-curves and m Y-curves. Coefficient noise is sampled directly in
/// the 9-dimensional basis space (the model is an exact finite expansion).
/// Draw order: all X curves (eps, then gamma where present), then all Y
/// curves; reproducible from spec.seed.
inline std::pair<SampleSet, SampleSet> sample_scenario(const ScenarioSpec& spec, Eigen::Index n,
                                                       Eigen::Index m) {
    spec.validate();
    if (n < 1 || m < 1) throw ParameterError("n and m must be >= 1");
    const Eigen::Index p = spec.grid.size();
    const Eigen::MatrixXd design = fourier_design(spec.grid);
    Eigen::VectorXd bump(p);
    for (Eigen::Index i = 0; i < p; ++i) {
        const double d = spec.grid.point(i) - spec.bump_center;
        bump[i] = std::exp(-d * d);
    }
    const double eps_sd = std::sqrt(spec.eps_var);
    const double tau = std::sqrt(spec.tau2);

    Rng rng(spec.seed);
    Eigen::MatrixXd x_rows(n, p);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::VectorXd coeff = spec.beta_x + eps_sd * rng.gaussian_vector(9);
        Eigen::VectorXd row = design * coeff;
        if (spec.bump_on_x()) {
            const Eigen::VectorXd gamma = tau * rng.gaussian_vector(9);
            row += bump.cwiseProduct(design * gamma);
        }
        x_rows.row(i) = row.transpose();
    }
    Eigen::MatrixXd y_rows(m, p);
    for (Eigen::Index j = 0; j < m; ++j) {
        const Eigen::VectorXd coeff = spec.beta_y + eps_sd * rng.gaussian_vector(9);
        y_rows.row(j) = (design * coeff).transpose();
    }
    return {SampleSet(spec.grid, std::move(x_rows)), SampleSet(spec.grid, std::move(y_rows))};
}

/// Exact population parameters implied by the generative model:
///   mu(t) = beta^T Phi(t),
///   Sigma(t, s) = eps_var Phi(t)^T Phi(s)
///               [+ tau2 g(t) g(s) Phi(t)^T Phi(s) on the X side of B/C],
/// with g(t) = exp(-(t - bump_center)^2), evaluated over the grid.
inline std::pair<GaussianParams, GaussianParams> true_params(const ScenarioSpec& spec) {
    spec.validate();
    const Eigen::Index p = spec.grid.size();
    const Eigen::MatrixXd design = fourier_design(spec.grid);
    const Eigen::MatrixXd gram = design * design.transpose();
    Eigen::VectorXd bump(p);
    for (Eigen::Index i = 0; i < p; ++i) {
        const double d = spec.grid.point(i) - spec.bump_center;
        bump[i] = std::exp(-d * d);
    }
    Eigen::MatrixXd cov_y = spec.eps_var * gram;
    Eigen::MatrixXd cov_x = cov_y;
    if (spec.bump_on_x())
        cov_x += spec.tau2 * (bump * bump.transpose()).cwiseProduct(gram);
    GaussianParams x(spec.grid, design * spec.beta_x, std::move(cov_x));
    GaussianParams y(spec.grid, design * spec.beta_y, std::move(cov_y));
    return {std::move(x), std::move(y)};
}

/// Population-level interval of maximum local divergence: select_interval on
/// the true parameters after shrinkage by eta (needed because the exact
/// covariances are low rank; see kDefaultStudyEta).
inline Window true_interval(const ScenarioSpec& spec, double c, double eta = kDefaultStudyEta,
                            const SelectOptions& opts = {}) {
    auto [x, y] = true_params(spec);
    return select_interval(shrink_covariance(x, eta), shrink_covariance(y, eta), c, opts).window;
}

}  // namespace gpkl
