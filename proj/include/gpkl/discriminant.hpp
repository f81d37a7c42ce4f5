#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "gpkl/cholesky.hpp"
#include "gpkl/errors.hpp"
#include "gpkl/gaussian.hpp"
#include "gpkl/parallel.hpp"
#include "gpkl/rng.hpp"
#include "gpkl/select.hpp"

namespace gpkl {

enum class Group : std::uint8_t { X, Y };

/// Curves with group tags over a common grid.
class LabeledSamples {
public:
    LabeledSamples(Grid grid, Eigen::MatrixXd rows, std::vector<Group> labels)
        : grid_(std::move(grid)), rows_(std::move(rows)), labels_(std::move(labels)) {
        if (rows_.rows() != static_cast<Eigen::Index>(labels_.size()))
            throw ShapeError("label count does not match row count");
        if (rows_.cols() != grid_.size())
            throw ShapeError("curve length does not match grid size");
        if (!rows_.allFinite()) throw InvalidDataError("sample values must be finite");
    }

    const Grid& grid() const { return grid_; }
    Eigen::Index count() const { return rows_.rows(); }
    const Eigen::MatrixXd& rows() const { return rows_; }
    const std::vector<Group>& labels() const { return labels_; }

    Eigen::Index group_count(Group g) const {
        Eigen::Index n = 0;
        for (Group l : labels_)
            if (l == g) ++n;
        return n;
    }

    SampleSet group_rows(Group g) const {
        const Eigen::Index n = group_count(g);
        if (n < 1) throw TrainingError("group has no samples");
        Eigen::MatrixXd out(n, rows_.cols());
        Eigen::Index r = 0;
        for (Eigen::Index i = 0; i < count(); ++i)
            if (labels_[static_cast<std::size_t>(i)] == g) out.row(r++) = rows_.row(i);
        return SampleSet(grid_, std::move(out));
    }

    LabeledSamples subset(const std::vector<Eigen::Index>& idx) const {
        Eigen::MatrixXd out(static_cast<Eigen::Index>(idx.size()), rows_.cols());
        std::vector<Group> labels(idx.size());
        for (std::size_t r = 0; r < idx.size(); ++r) {
            out.row(static_cast<Eigen::Index>(r)) = rows_.row(idx[r]);
            labels[r] = labels_[static_cast<std::size_t>(idx[r])];
        }
        return LabeledSamples(grid_, std::move(out), std::move(labels));
    }

private:
    Grid grid_;
    Eigen::MatrixXd rows_;
    std::vector<Group> labels_;
};

/// Quadratic Gaussian discriminant restricted to a window. Cholesky factors
/// and log-dets are cached at training time; scoring is pure.
class DAModel {
public:
    DAModel(Window window, GaussianParams params_x, GaussianParams params_y, double prior_x)
        : window_(window),
          params_x_(std::move(params_x)),
          params_y_(std::move(params_y)),
          prior_x_(prior_x) {
        if (!(prior_x_ > 0.0 && prior_x_ < 1.0))
            throw ParameterError("prior_x must be in (0, 1)");
        try {
            chol_x_ = std::make_shared<CholeskyFactor>(params_x_.cov(), "group X covariance");
            chol_y_ = std::make_shared<CholeskyFactor>(params_y_.cov(), "group Y covariance");
        } catch (const SingularMatrixError& e) {
            throw TrainingError(std::string("singular training covariance: ") + e.what());
        }
        logdet_x_ = chol_x_->log_det();
        logdet_y_ = chol_y_->log_det();
    }

    const Window& window() const { return window_; }
    const GaussianParams& params_x() const { return params_x_; }
    const GaussianParams& params_y() const { return params_y_; }
    double prior_x() const { return prior_x_; }
    double prior_y() const { return 1.0 - prior_x_; }

    /// Eq.-(6)-style score; positive classifies as X (0 counts as X).
    double score(const Eigen::VectorXd& z) const {
        if (z.size() != params_x_.dim())
            throw ShapeError("observation length does not match model window");
        const double qy = chol_y_->half_solve(Eigen::VectorXd(z - params_y_.mean())).squaredNorm();
        const double qx = chol_x_->half_solve(Eigen::VectorXd(z - params_x_.mean())).squaredNorm();
        return 0.5 * (qy - qx - (logdet_x_ - logdet_y_)) + std::log(prior_x_ / (1.0 - prior_x_));
    }

    Group classify(const Eigen::VectorXd& z) const {
        return score(z) >= 0.0 ? Group::X : Group::Y;
    }

private:
    Window window_;
    GaussianParams params_x_;
    GaussianParams params_y_;
    double prior_x_;
    std::shared_ptr<CholeskyFactor> chol_x_, chol_y_;
    double logdet_x_ = 0.0, logdet_y_ = 0.0;
};

/// Trains the window-restricted discriminant: per-group ML parameters with
/// shrinkage eta, prior_x = n_X / N unless overridden.
inline DAModel train_da(const LabeledSamples& train, const Window& window, double eta,
                        std::optional<double> prior_x_override = std::nullopt) {
    validate_window(window, train.grid());
    const Eigen::Index nx = train.group_count(Group::X);
    const Eigen::Index ny = train.group_count(Group::Y);
    if (nx < 2 || ny < 2)
        throw TrainingError("training needs at least 2 samples in each group (have " +
                            std::to_string(nx) + " X, " + std::to_string(ny) + " Y)");
    const GaussianParams px =
        restrict(shrink_covariance(estimate_params(train.group_rows(Group::X)), eta), window);
    const GaussianParams py =
        restrict(shrink_covariance(estimate_params(train.group_rows(Group::Y)), eta), window);
    const double prior_x = prior_x_override
                               ? *prior_x_override
                               : static_cast<double>(nx) / static_cast<double>(nx + ny);
    return DAModel(window, px, py, prior_x);
}

inline double discriminant_score(const DAModel& model, const Eigen::VectorXd& z) {
    return model.score(z);
}

/// Misclassification rate on held-out data (window columns are taken from
/// the full-grid rows).
inline double estimate_error(const DAModel& model, const LabeledSamples& test) {
    if (test.count() < 1) throw ParameterError("test set is empty");
    const Window& w = model.window();
    validate_window(w, test.grid());
    Eigen::Index wrong = 0;
    for (Eigen::Index i = 0; i < test.count(); ++i) {
        const Eigen::VectorXd z = test.rows().row(i).segment(w.start, w.size);
        if (model.classify(z) != test.labels()[static_cast<std::size_t>(i)]) ++wrong;
    }
    return static_cast<double>(wrong) / static_cast<double>(test.count());
}

struct CvPoint {
    double c = 0.0;
    double mean_error = 0.0;
    std::vector<double> split_errors;  // one per split, in split order
};

struct CvResult {
    double best_c = 0.0;
    std::vector<CvPoint> curve;
};

struct CvOptions {
    SelectOptions select;
    std::optional<double> prior_x_override;
    unsigned threads = 0;
    int max_split_retries = 100;
};

/// Cross-validated choice of c: for each of B random train/test splits, the
/// window and the discriminant are learned on the training half and scored
/// on the test half, for every candidate c. Returns the per-c mean test
/// error (with the full per-split error vectors) and the argmin c, ties
/// going to the smallest c. Splits that leave a group with fewer than 2
/// training or 1 test samples are redrawn a bounded number of times.
inline CvResult select_c_cv(const LabeledSamples& data, const std::vector<double>& c_candidates,
                            double split_fraction, int B, std::uint64_t seed, double eta,
                            const CvOptions& opts = {}) {
    if (c_candidates.empty()) throw ParameterError("c_candidates must be non-empty");
    if (!(split_fraction > 0.0 && split_fraction < 1.0))
        throw ParameterError("split_fraction must be in (0, 1)");
    if (B < 1) throw ParameterError("B must be >= 1");
    const Eigen::Index total = data.count();
    const auto train_size = static_cast<Eigen::Index>(
        std::llround(split_fraction * static_cast<double>(total)));
    if (train_size < 4 || train_size >= total)
        throw ParameterError("split leaves too few samples for training or testing");

    std::vector<std::vector<double>> errors(
        c_candidates.size(), std::vector<double>(static_cast<std::size_t>(B), 0.0));

    detail::parallel_for(
        static_cast<std::size_t>(B),
        [&](std::size_t b) {
            Rng rng = derive_rng(seed, static_cast<std::uint64_t>(b));
            std::vector<Eigen::Index> order(static_cast<std::size_t>(total));
            for (Eigen::Index i = 0; i < total; ++i) order[static_cast<std::size_t>(i)] = i;

            std::optional<LabeledSamples> train, test;
            for (int attempt = 0; attempt <= opts.max_split_retries; ++attempt) {
                rng.shuffle(order);
                LabeledSamples tr = data.subset(
                    {order.begin(), order.begin() + static_cast<std::ptrdiff_t>(train_size)});
                LabeledSamples te = data.subset(
                    {order.begin() + static_cast<std::ptrdiff_t>(train_size), order.end()});
                if (tr.group_count(Group::X) >= 2 && tr.group_count(Group::Y) >= 2 &&
                    te.group_count(Group::X) >= 1 && te.group_count(Group::Y) >= 1) {
                    train = std::move(tr);
                    test = std::move(te);
                    break;
                }
            }
            if (!train)
                throw TrainingError("could not draw a split with both groups represented");

            const GaussianParams px =
                shrink_covariance(estimate_params(train->group_rows(Group::X)), eta);
            const GaussianParams py =
                shrink_covariance(estimate_params(train->group_rows(Group::Y)), eta);
            const Eigen::Index nx = train->group_count(Group::X);
            const double prior_x =
                opts.prior_x_override ? *opts.prior_x_override
                                      : static_cast<double>(nx) / static_cast<double>(train_size);
            for (std::size_t ci = 0; ci < c_candidates.size(); ++ci) {
                const SelectionResult sel = select_interval(px, py, c_candidates[ci], opts.select);
                const DAModel model(sel.window, restrict(px, sel.window),
                                    restrict(py, sel.window), prior_x);
                errors[ci][b] = estimate_error(model, *test);
            }
        },
        opts.threads);

    CvResult result;
    result.curve.resize(c_candidates.size());
    std::size_t best = 0;
    for (std::size_t ci = 0; ci < c_candidates.size(); ++ci) {
        CvPoint& pt = result.curve[ci];
        pt.c = c_candidates[ci];
        pt.split_errors = errors[ci];
        double sum = 0.0;
        for (double e : pt.split_errors) sum += e;
        pt.mean_error = sum / static_cast<double>(B);
        const CvPoint& cur = result.curve[best];
        if (ci > 0 && (pt.mean_error < cur.mean_error ||
                       (pt.mean_error == cur.mean_error && pt.c < cur.c)))
            best = ci;
    }
    result.best_c = result.curve[best].c;
    return result;
}

}  // namespace gpkl
