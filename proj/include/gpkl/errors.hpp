#pragma once

#include <stdexcept>
#include <string>

namespace gpkl {

/// Base class for all gpkl errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid numeric input (NaN/Inf entries, empty data).
class InvalidDataError : public Error {
public:
    using Error::Error;
};

/// A parameter is outside its documented range (eta, c, alpha, variance, ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Dimension or grid mismatch between operands.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Window indices outside the grid.
class IndexError : public Error {
public:
    using Error::Error;
};

/// Cholesky factorization failed: the matrix is not positive definite.
/// `leading_minor` is the 1-based index of the first non-positive leading
/// principal minor (LAPACK convention).
class SingularMatrixError : public Error {
public:
    SingularMatrixError(const std::string& what, int leading_minor)
        : Error(what), leading_minor_(leading_minor) {}

    int leading_minor() const noexcept { return leading_minor_; }

private:
    int leading_minor_;
};

/// A computed quantity violates a numerical consistency bound
/// (e.g. a KL divergence below -1e-10).
class NumericError : public Error {
public:
    using Error::Error;
};

/// CSV / input file could not be parsed. `line` is 1-based, 0 if unknown.
class ParseError : public Error {
public:
    ParseError(const std::string& what, long line = 0) : Error(what), line_(line) {}

    long line() const noexcept { return line_; }

private:
    long line_;
};

/// Classifier training failed (missing group, singular group covariance).
class TrainingError : public Error {
public:
    using Error::Error;
};

}  // namespace gpkl
