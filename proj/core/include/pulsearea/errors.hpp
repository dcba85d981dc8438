#pragma once

#include <stdexcept>
#include <string>

namespace pulsearea {

/// Bad user-supplied parameter (non-finite, out of range, inconsistent).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Base for every failure raised while producing or analysing a trajectory.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input lies outside the region where the requested quantity exists,
/// e.g. the lossless area integral evaluated at or beyond 2π.
class DomainError : public SolverError {
public:
    using SolverError::SolverError;
};

/// Adaptive quadrature could not reach the requested tolerance.
class ToleranceError : public SolverError {
public:
    ToleranceError(const std::string& what, double achieved, double requested)
        : SolverError(what), achieved_(achieved), requested_(requested) {}

    double achieved() const noexcept { return achieved_; }
    double requested() const noexcept { return requested_; }

private:
    double achieved_;
    double requested_;
};

/// The initial value integration failed (step underflow, first-integral
/// drift, failure to reach the requested area).
class IntegrationError : public SolverError {
public:
    using SolverError::SolverError;
};

/// Query outside the sampled range of a trajectory.
class RangeError : public SolverError {
public:
    using SolverError::SolverError;
};

}  // namespace pulsearea
