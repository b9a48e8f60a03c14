#pragma once

#include <stdexcept>
#include <string>

namespace argpca {

/// Raised when inputs violate an operation's preconditions (shape, range, model constraints).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Base for failures that come from the numbers themselves rather than the caller.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Gram matrix of the centered data has rank below n-1.
class DegenerateDataError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// S_m - lambda_tilde * I is (numerically) singular: lambda_hat_m == lambda_tilde.
class SingularRidgeError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// A constructed basis lost rank, e.g. a reference coincides with a sample PC direction.
class DegenerateGeometryError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace argpca
