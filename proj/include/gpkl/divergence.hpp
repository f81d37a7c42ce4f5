#pragma once

#include <cmath>
#include <optional>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include "gpkl/cholesky.hpp"
#include "gpkl/errors.hpp"
#include "gpkl/gaussian.hpp"
#include "gpkl/window.hpp"

namespace gpkl {

/// A Kullback-Leibler divergence value in nats, with the window it was
/// computed on when applicable.
struct KLValue {
    double value = 0.0;
    std::optional<Window> window;
};

namespace detail {

/// KL values are non-negative by theory. Tiny negatives from rounding are
/// clamped; anything below -1e-10 means a broken covariance pipeline and is
/// an error, not something to hide.
inline double finalize_kl(double v) {
    if (v < -1e-10)
        throw NumericError("KL divergence evaluated to " + std::to_string(v) +
                           "; covariance inputs are numerically inconsistent");
    return v < 0.0 ? 0.0 : v;
}

}  // namespace detail

/// Closed-form KL divergence between two univariate Gaussians:
///   KL(X||Y) = (var_x/var_y - 1 + (mu_x - mu_y)^2/var_y + ln(var_y/var_x)) / 2.
inline double kl_univariate(double mu_x, double var_x, double mu_y, double var_y) {
    if (!(var_x > 0.0)) throw ParameterError("var_x must be positive");
    if (!(var_y > 0.0)) throw ParameterError("var_y must be positive");
    const double dm = mu_x - mu_y;
    const double v = 0.5 * (var_x / var_y - 1.0 + dm * dm / var_y + std::log(var_y / var_x));
    return detail::finalize_kl(v);
}

/// KL divergence between two Gaussian laws over the full grid:
///   KL(X||Y) = ( tr(S_Y^-1 S_X) - p + d^T S_Y^-1 d + ln det S_Y - ln det S_X ) / 2
/// with d = mu_Y - mu_X. Everything is evaluated through Cholesky factors:
/// the trace as the squared Frobenius norm of L_Y^-1 L_X, the quadratic form
/// as |L_Y^-1 d|^2, the determinants as log-dets. No explicit inverse and no
/// raw determinant is ever formed.
inline KLValue kl_full(const GaussianParams& x, const GaussianParams& y) {
    if (!x.grid().same_as(y.grid()))
        throw ShapeError("x and y must share the same grid");
    const Eigen::Index p = x.dim();
    const CholeskyFactor chol_y(y.cov(), "covariance of Y");
    const CholeskyFactor chol_x(x.cov(), "covariance of X (log-det)");
    const double trace_term = chol_y.half_solve(chol_x.lower()).squaredNorm();
    const Eigen::VectorXd w = chol_y.half_solve(Eigen::VectorXd(y.mean() - x.mean()));
    const double quad = w.squaredNorm();
    const double v = 0.5 * (trace_term - static_cast<double>(p) + quad) +
                     0.5 * (chol_y.log_det() - chol_x.log_det());
    return {detail::finalize_kl(v), std::nullopt};
}

/// Local KL divergence: KL of the parameters restricted to a window.
inline KLValue kl_local(const GaussianParams& x, const GaussianParams& y, const Window& window) {
    KLValue v = kl_full(restrict(x, window), restrict(y, window));
    v.window = window;
    return v;
}

/// Symmetrized variant: (KL(X||Y) + KL(Y||X)) / 2 on the window.
inline KLValue kl_symmetrized(const GaussianParams& x, const GaussianParams& y,
                              const Window& window) {
    const KLValue xy = kl_local(x, y, window);
    const KLValue yx = kl_local(y, x, window);
    return {0.5 * xy.value + 0.5 * yx.value, window};
}

/// Independent eigenvalue-form evaluation:
///   2 KL(X||Y) = sum_i (g_i - ln g_i) - p + d^T S_Y^-1 d,
/// where g_i are the eigenvalues of S_Y^-1 S_X (generalized symmetric
/// eigenproblem). Serves as a cross-check oracle for kl_full; the quadratic
/// form here goes through an eigendecomposition of S_Y, so no code is shared
/// with the Cholesky path.
inline double kl_eigen_oracle(const GaussianParams& x, const GaussianParams& y) {
    if (!x.grid().same_as(y.grid()))
        throw ShapeError("x and y must share the same grid");
    const Eigen::Index p = x.dim();
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> gen(x.cov(), y.cov());
    if (gen.info() != Eigen::Success)
        throw SingularMatrixError("generalized eigenproblem failed (covariances not PD)", 0);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < p; ++i) {
        const double g = gen.eigenvalues()[i];
        if (!(g > 0.0))
            throw SingularMatrixError("covariance of X is not positive definite", 0);
        sum += g - std::log(g);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(y.cov());
    if (es.info() != Eigen::Success || !(es.eigenvalues().minCoeff() > 0.0))
        throw SingularMatrixError("covariance of Y is not positive definite", 0);
    const Eigen::VectorXd proj = es.eigenvectors().transpose() * (y.mean() - x.mean());
    const double quad = (proj.array().square() / es.eigenvalues().array()).sum();
    return detail::finalize_kl(0.5 * (sum - static_cast<double>(p) + quad));
}

}  // namespace gpkl
