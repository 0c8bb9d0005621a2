#pragma once

#include <stdexcept>
#include <string>

namespace co2occ {

/// Malformed input: bad arguments, schema violations, mismatched series.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A fit or statistic cannot be computed because the data has no spread
/// (all-equal regressor, constant target, zero-variance feature column).
class NoVarianceError : public ValidationError {
public:
    explicit NoVarianceError(const std::string& msg) : ValidationError(msg) {}
};

/// Local regression neighbourhood collapsed onto too few distinct points.
class DegenerateNeighborhoodError : public ValidationError {
public:
    explicit DegenerateNeighborhoodError(const std::string& msg) : ValidationError(msg) {}
};

/// Design matrix is rank-deficient.
class CollinearityError : public ValidationError {
public:
    explicit CollinearityError(const std::string& msg) : ValidationError(msg) {}
};

/// No repeated pattern was found in a seasonal component.
class AperiodicError : public ValidationError {
public:
    explicit AperiodicError(const std::string& msg) : ValidationError(msg) {}
};

/// No time-of-day interval is vacant on every observed day.
class EmptyWindowError : public ValidationError {
public:
    explicit EmptyWindowError(const std::string& msg) : ValidationError(msg) {}
};

/// Requested integration step violates the explicit-Euler stability bound.
class UnstableStepError : public ValidationError {
public:
    explicit UnstableStepError(const std::string& msg) : ValidationError(msg) {}
};

} // namespace co2occ
