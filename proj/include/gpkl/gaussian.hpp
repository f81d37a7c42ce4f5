#pragma once

#include <cmath>
#include <utility>

#include <Eigen/Core>

#include "gpkl/cholesky.hpp"
#include "gpkl/errors.hpp"
#include "gpkl/grid.hpp"
#include "gpkl/window.hpp"

namespace gpkl {

/// Mean vector and covariance matrix of a Gaussian law over a grid.
///
/// The covariance is symmetrized as (C + C^T)/2 on construction after a
/// relative 1e-10 symmetry check. Positive definiteness is not demanded
/// here; operations that need an inverse check it through Cholesky and
/// throw SingularMatrixError.
class GaussianParams {
public:
    GaussianParams(Grid grid, Eigen::VectorXd mean, Eigen::MatrixXd cov)
        : grid_(std::move(grid)), mean_(std::move(mean)), cov_(std::move(cov)) {
        const Eigen::Index p = grid_.size();
        if (mean_.size() != p) throw ShapeError("mean length does not match grid size");
        if (cov_.rows() != p || cov_.cols() != p)
            throw ShapeError("covariance dimensions do not match grid size");
        if (!mean_.allFinite() || !cov_.allFinite())
            throw InvalidDataError("parameters must be finite");
        const double scale = std::max(1.0, cov_.cwiseAbs().maxCoeff());
        const double asym = (cov_ - cov_.transpose()).cwiseAbs().maxCoeff();
        if (asym > 1e-10 * scale)
            throw InvalidDataError("covariance is not symmetric within relative tolerance 1e-10");
        cov_ = ((cov_ + cov_.transpose()) / 2.0).eval();
    }

    const Grid& grid() const { return grid_; }
    Eigen::Index dim() const { return grid_.size(); }
    const Eigen::VectorXd& mean() const { return mean_; }
    const Eigen::MatrixXd& cov() const { return cov_; }

private:
    Grid grid_;
    Eigen::VectorXd mean_;
    Eigen::MatrixXd cov_;
};

/// n observed curves over a common grid, one per row.
class SampleSet {
public:
    SampleSet(Grid grid, Eigen::MatrixXd rows) : grid_(std::move(grid)), rows_(std::move(rows)) {
        if (rows_.rows() < 1) throw InvalidDataError("sample set needs at least one curve");
        if (rows_.cols() != grid_.size())
            throw ShapeError("curve length does not match grid size");
        if (!rows_.allFinite()) throw InvalidDataError("sample values must be finite");
    }

    const Grid& grid() const { return grid_; }
    Eigen::Index count() const { return rows_.rows(); }
    const Eigen::MatrixXd& rows() const { return rows_; }

    SampleSet resampled(const std::vector<Eigen::Index>& idx) const {
        Eigen::MatrixXd out(static_cast<Eigen::Index>(idx.size()), rows_.cols());
        for (std::size_t r = 0; r < idx.size(); ++r)
            out.row(static_cast<Eigen::Index>(r)) = rows_.row(idx[r]);
        return SampleSet(grid_, std::move(out));
    }

private:
    Grid grid_;
    Eigen::MatrixXd rows_;
};

/// Maximum likelihood estimates: mean is the row average and the covariance
/// uses the 1/n normalization (not 1/(n-1)), matching the estimator the rest
/// of the pipeline is built on. With a single curve the covariance is zero.
///
/// The covariance is accumulated entry by entry in a fixed scalar order so
/// that estimating on a window equals restricting the full-grid estimate
/// bit for bit (no layout-dependent SIMD reductions).
inline GaussianParams estimate_params(const SampleSet& samples) {
    const Eigen::MatrixXd& rows = samples.rows();
    const Eigen::Index n = rows.rows();
    const Eigen::Index p = rows.cols();
    const double inv_n = 1.0 / static_cast<double>(n);
    Eigen::VectorXd mean(p);
    for (Eigen::Index j = 0; j < p; ++j) {
        double s = 0.0;
        for (Eigen::Index r = 0; r < n; ++r) s += rows(r, j);
        mean[j] = s * inv_n;
    }
    Eigen::MatrixXd centered(n, p);
    for (Eigen::Index j = 0; j < p; ++j)
        for (Eigen::Index r = 0; r < n; ++r) centered(r, j) = rows(r, j) - mean[j];
    Eigen::MatrixXd cov(p, p);
    for (Eigen::Index i = 0; i < p; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
            double s = 0.0;
            const double* ci = centered.col(i).data();
            const double* cj = centered.col(j).data();
            for (Eigen::Index r = 0; r < n; ++r) s += ci[r] * cj[r];
            const double v = s * inv_n;
            cov(i, j) = v;
            cov(j, i) = v;
        }
    }
    return GaussianParams(samples.grid(), std::move(mean), std::move(cov));
}

/// Shrinkage toward the diagonal: off-diagonal entries scaled by eta, the
/// diagonal kept. eta = 1 is the identity, eta = 0 keeps only the diagonal.
/// Preserves symmetry, and positive definiteness for eta < 1 whenever the
/// diagonal is positive.
inline GaussianParams shrink_covariance(const GaussianParams& params, double eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) throw ParameterError("eta must be in [0, 1]");
    Eigen::MatrixXd cov = eta * params.cov();
    cov.diagonal() = params.cov().diagonal();
    return GaussianParams(params.grid(), params.mean(), std::move(cov));
}

/// Default ridge used by the --jitter escape hatch: 1e-8 * trace / p.
inline double default_jitter(const Eigen::MatrixXd& cov) {
    return 1e-8 * cov.trace() / static_cast<double>(cov.rows());
}

/// cov + delta * I (delta <= 0 picks the default ridge).
inline GaussianParams add_jitter(const GaussianParams& params, double delta = 0.0) {
    const double d = delta > 0.0 ? delta : default_jitter(params.cov());
    Eigen::MatrixXd cov = params.cov();
    cov.diagonal().array() += d;
    return GaussianParams(params.grid(), params.mean(), std::move(cov));
}

/// Mean sub-vector and principal covariance sub-matrix for a contiguous
/// window, on the corresponding sub-grid.
inline GaussianParams restrict(const GaussianParams& params, const Window& window) {
    validate_window(window, params.grid());
    return GaussianParams(params.grid().sub(window.start, window.size),
                          params.mean().segment(window.start, window.size),
                          params.cov().block(window.start, window.start, window.size, window.size));
}

inline SampleSet restrict(const SampleSet& samples, const Window& window) {
    validate_window(window, samples.grid());
    return SampleSet(samples.grid().sub(window.start, window.size),
                     samples.rows().middleCols(window.start, window.size));
}

}  // namespace gpkl
