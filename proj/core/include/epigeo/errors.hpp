#pragma once

#include <stdexcept>
#include <string>

namespace epigeo {

/// Base class for all epigeo runtime failures.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A point (or a homogenized image) landed on or numerically near the
/// singular hyperplane of a projective transform.
struct SingularPlaneError : Error {
    using Error::Error;
};

/// Two points that must differ coincide (e.g. agent position == target).
struct DegenerateDirectionError : Error {
    using Error::Error;
};

/// A covariance update produced a matrix that is not positive definite
/// beyond tolerance; signals numerical breakdown of the belief recursion.
struct NotPositiveDefiniteError : Error {
    using Error::Error;
};

/// Too much belief mass lies near the singular hyperplane for a
/// sample-based pushforward to be meaningful.
struct SingularMassError : Error {
    using Error::Error;
};

/// Empirical covariance stayed non-PD even after regularization.
struct DegenerateCovarianceError : Error {
    using Error::Error;
};

/// A quadrature node set fails to cover the mapped sample cloud.
struct InsufficientCoverageError : Error {
    using Error::Error;
};

/// Malformed or inconsistent experiment configuration.
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace epigeo
