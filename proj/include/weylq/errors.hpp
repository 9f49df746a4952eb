#pragma once

#include <stdexcept>
#include <string>

namespace weylq {

/// Malformed input to a series operation (log² product, non-unit reciprocal, ...).
class SeriesError : public std::domain_error {
public:
    explicit SeriesError(const std::string& what) : std::domain_error(what) {}
};

/// Boundary dimension outside the supported range (n even, n >= 4).
class InvalidDimension : public std::invalid_argument {
public:
    explicit InvalidDimension(const std::string& what) : std::invalid_argument(what) {}
};

/// A computed identity failed to hold exactly: nonzero residual, disagreeing
/// routes, broken leading cancellation. The CLI maps this to exit code 3.
class ConsistencyError : public std::runtime_error {
public:
    explicit ConsistencyError(const std::string& what) : std::runtime_error(what) {}
};

/// Request the Einstein backends cannot serve (non-constant conformal factor,
/// symbolic eigenvalue where an integral is needed, ...).
class UnsupportedError : public std::invalid_argument {
public:
    explicit UnsupportedError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace weylq
