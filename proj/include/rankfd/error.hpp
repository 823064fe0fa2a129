#pragma once

#include <stdexcept>
#include <string>

namespace rankfd {

/// Base class of all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Incompatible matrix/vector/design dimensions.
class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// A group-by-occasion cell has fewer than two observations, so the
/// variance denominators are not positive.
class EmptyCell : public Error {
public:
    using Error::Error;
};

/// A hypothesis kind is not supported for the given (a, d) layout.
class InvalidDesign : public Error {
public:
    using Error::Error;
};

/// tr(T V) is not positive: no variability under the hypothesis projection.
class DegenerateTrace : public Error {
public:
    using Error::Error;
};

/// A diagonal entry of the covariance estimate is zero (constant cell).
class ZeroDiagonal : public Error {
public:
    using Error::Error;
};

/// A copula correlation matrix admits no Cholesky factor.
class NotPositiveDefinite : public Error {
public:
    using Error::Error;
};

/// Malformed input file content; message carries row/column location.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Structurally wrong table layout (missing columns, duplicate subjects, ...).
class SchemaError : public Error {
public:
    using Error::Error;
};

/// Invalid simulation configuration; message carries a JSON-pointer path.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace rankfd
