#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fracctl {

/// Base of every error raised by the library. Each subclass maps to one
/// diagnosis category that the CLI turns into an exit code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Gamma function evaluated at a pole (non-positive integer).
class PoleError : public DomainError {
public:
    using DomainError::DomainError;
};

/// A series, asymptotic expansion or quadrature could not certify its
/// tolerance.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// Alternating series whose cancellation would destroy the result.
class PrecisionLossError : public ConvergenceError {
public:
    using ConvergenceError::ConvergenceError;
};

/// Config or argument validation failure; names the offending field.
class ValidationError : public Error {
public:
    ValidationError(std::string field, const std::string& what)
        : Error(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Malformed input document.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Carries the list of 1-based mode indices the actuator cannot excite.
class DeadModeError : public Error {
public:
    DeadModeError(const std::string& what, std::vector<int> dead_modes)
        : Error(what), dead_modes_(std::move(dead_modes)) {}
    const std::vector<int>& dead_modes() const noexcept { return dead_modes_; }

private:
    std::vector<int> dead_modes_;
};

/// The actuator does not excite every mode of the polar space.
class NonStrategicError : public DeadModeError {
public:
    using DeadModeError::DeadModeError;
};

/// Gramian numerically singular on the polar space.
class SingularGramianError : public DeadModeError {
public:
    using DeadModeError::DeadModeError;
};

/// Terminal constraint cannot be met by any control of the discrete dynamics.
class InfeasibleError : public DeadModeError {
public:
    using DeadModeError::DeadModeError;
};

}  // namespace fracctl
