#pragma once

#include <stdexcept>
#include <string>

namespace hypgap {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Arguments outside the admissible domain (n, theta1, theta, order, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// theta beyond the configured theta_max.
class DomainTooLarge : public DomainError {
public:
    using DomainError::DomainError;
};

/// Gamma function evaluated at a nonpositive integer.
class PoleError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Series, iteration, bracketing or extrapolation failed to converge.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

class BracketFailure : public ConvergenceError {
public:
    using ConvergenceError::ConvergenceError;
};

/// Solution magnitude left the representable range during integration.
class IntegrationOverflow : public Error {
public:
    using Error::Error;
};

/// lambda at or above the first Dirichlet eigenvalue.
class RejectedLambda : public DomainError {
public:
    using DomainError::DomainError;
};

/// A result violated an ordering that must hold mathematically; indicates a numerics bug.
class InvariantViolation : public Error {
public:
    using Error::Error;
};

} // namespace hypgap
