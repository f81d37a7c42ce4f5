#pragma once

#include <cmath>
#include <optional>
#include <utility>

#include <Eigen/Core>

#include "gpkl/errors.hpp"

namespace gpkl {

/// An ordered, equally spaced time grid t_1 < ... < t_p together with the
/// length of the domain it discretizes. Only the common-grid case is
/// supported: inputs must already live on one shared grid.
///
/// domain_length defaults to the grid extent t_p - t_1 and may be overridden
/// (the simulation grids span [0, pi) and carry domain_length pi).
class Grid {
public:
    /// Validating constructor for full grids (p >= 2, strictly increasing,
    /// equally spaced within 1e-9 relative tolerance).
    explicit Grid(Eigen::VectorXd points, std::optional<double> domain_length = std::nullopt)
        : points_(std::move(points)) {
        const Eigen::Index p = points_.size();
        if (p < 2) throw ParameterError("grid needs at least 2 points");
        if (!points_.allFinite()) throw InvalidDataError("grid points must be finite");
        const double spacing = (points_[p - 1] - points_[0]) / static_cast<double>(p - 1);
        if (!(spacing > 0.0)) throw ParameterError("grid points must be strictly increasing");
        const double tol = 1e-9 * std::max(1.0, std::abs(spacing));
        for (Eigen::Index i = 1; i < p; ++i) {
            const double d = points_[i] - points_[i - 1];
            if (!(d > 0.0)) throw ParameterError("grid points must be strictly increasing");
            if (std::abs(d - spacing) > tol)
                throw ParameterError("grid points must be equally spaced (relative tolerance 1e-9)");
        }
        spacing_ = spacing;
        domain_length_ = domain_length.value_or(extent());
        if (domain_length_ < extent() - tol)
            throw ParameterError("domain_length must be at least the grid extent");
    }

    /// p points t_0 + i * spacing.
    static Grid uniform(Eigen::Index p, double t0, double spacing,
                        std::optional<double> domain_length = std::nullopt) {
        Eigen::VectorXd pts(p);
        for (Eigen::Index i = 0; i < p; ++i) pts[i] = t0 + static_cast<double>(i) * spacing;
        return Grid(std::move(pts), domain_length);
    }

    /// Default grid when no time information is supplied: 0, 1, ..., p-1.
    static Grid unit_spaced(Eigen::Index p) { return uniform(p, 0.0, 1.0); }

    Eigen::Index size() const { return points_.size(); }
    const Eigen::VectorXd& points() const { return points_; }
    double point(Eigen::Index i) const { return points_[i]; }
    double spacing() const { return spacing_; }
    double extent() const { return points_[points_.size() - 1] - points_[0]; }
    double domain_length() const { return domain_length_; }

    /// Contiguous sub-grid (may have a single point; arises from window
    /// restriction, not from user input).
    Grid sub(Eigen::Index start, Eigen::Index count) const {
        if (start < 0 || count < 1 || start + count > size())
            throw IndexError("sub-grid range out of bounds");
        return Grid(points_.segment(start, count), spacing_, domain_length_);
    }

    /// Same size and points equal within 1e-12 relative tolerance.
    bool same_as(const Grid& other) const {
        if (size() != other.size()) return false;
        const double tol = 1e-12 * std::max(1.0, std::abs(extent()));
        return ((points_ - other.points_).cwiseAbs().maxCoeff() <= tol);
    }

private:
    Grid(Eigen::VectorXd points, double spacing, double domain_length)
        : points_(std::move(points)), spacing_(spacing), domain_length_(domain_length) {}

    Eigen::VectorXd points_;
    double spacing_ = 1.0;
    double domain_length_ = 0.0;
};

}  // namespace gpkl
