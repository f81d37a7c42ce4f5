#pragma once

#include <cmath>
#include <string>
#include <utility>

#include <Eigen/Core>

#include "gpkl/errors.hpp"

namespace gpkl {

/// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
///
/// Factorization is row-by-row (Cholesky-Banachiewicz) so a failure reports
/// the exact leading principal minor that is not positive definite. Log
/// determinants and linear solves go through the factor; the inverse is
/// never formed.
class CholeskyFactor {
public:
    explicit CholeskyFactor(const Eigen::MatrixXd& a, const std::string& label = "matrix") {
        const Eigen::Index n = a.rows();
        if (n != a.cols()) throw ShapeError(label + " is not square");
        lower_ = Eigen::MatrixXd::Zero(n, n);
        for (Eigen::Index j = 0; j < n; ++j) {
            const double d = a(j, j) - lower_.row(j).head(j).squaredNorm();
            if (!(d > 0.0) || !std::isfinite(d))
                throw SingularMatrixError(
                    label + " is not positive definite (leading minor " +
                        std::to_string(j + 1) + " of order " + std::to_string(n) + ")",
                    static_cast<int>(j + 1));
            lower_(j, j) = std::sqrt(d);
            for (Eigen::Index i = j + 1; i < n; ++i)
                lower_(i, j) =
                    (a(i, j) - lower_.row(i).head(j).dot(lower_.row(j).head(j))) / lower_(j, j);
        }
    }

    Eigen::Index dim() const { return lower_.rows(); }
    const Eigen::MatrixXd& lower() const { return lower_; }

    double log_det() const {
        return 2.0 * lower_.diagonal().array().log().sum();
    }

    /// x with A x = b.
    Eigen::VectorXd solve(const Eigen::VectorXd& b) const {
        Eigen::VectorXd y = lower_.triangularView<Eigen::Lower>().solve(b);
        return lower_.transpose().triangularView<Eigen::Upper>().solve(y);
    }

    Eigen::MatrixXd solve(const Eigen::MatrixXd& b) const {
        Eigen::MatrixXd y = lower_.triangularView<Eigen::Lower>().solve(b);
        return lower_.transpose().triangularView<Eigen::Upper>().solve(y);
    }

    /// y with L y = b (half solve; Frobenius norms of these give traces and
    /// quadratic forms without forming inverses).
    Eigen::VectorXd half_solve(const Eigen::VectorXd& b) const {
        return lower_.triangularView<Eigen::Lower>().solve(b);
    }

    Eigen::MatrixXd half_solve(const Eigen::MatrixXd& b) const {
        return lower_.triangularView<Eigen::Lower>().solve(b);
    }

private:
    Eigen::MatrixXd lower_;
};

/// Log determinant of an SPD matrix and the solution of cov * x = rhs.
/// The solution satisfies |cov x - rhs| <= 1e-8 |rhs| for well-conditioned
/// input; failure to factor throws SingularMatrixError with the failing
/// leading minor index.
inline std::pair<double, Eigen::MatrixXd> chol_logdet_and_solve(const Eigen::MatrixXd& cov,
                                                                const Eigen::MatrixXd& rhs) {
    CholeskyFactor chol(cov, "covariance");
    return {chol.log_det(), chol.solve(rhs)};
}

inline std::pair<double, Eigen::VectorXd> chol_logdet_and_solve(const Eigen::MatrixXd& cov,
                                                                const Eigen::VectorXd& rhs) {
    CholeskyFactor chol(cov, "covariance");
    return {chol.log_det(), chol.solve(rhs)};
}

}  // namespace gpkl
