#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>
#include <utility>

namespace tra {

/// Compact number rendering for error messages.
inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

/// Base of every library error.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input does not satisfy a documented precondition (CLI exit code 2).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A numerical procedure failed on valid input (CLI exit code 3).
class NumericalError : public Error {
public:
    using Error::Error;
};

class DomainError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class UnsupportedOracle : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class UnsupportedRow : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class DerivativeUnavailable : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// A class constraint does not hold; carries the relation and its residual.
class ConstraintViolation : public ValidationError {
public:
    ConstraintViolation(std::string relation, double residual)
        : ValidationError("constraint violated: " + relation + " (residual " + num(residual) + ")"),
          relation_(std::move(relation)),
          residual_(residual) {}

    explicit ConstraintViolation(const std::string& what) : ValidationError(what), residual_(0.0) {}

    const std::string& relation() const noexcept { return relation_; }
    double residual() const noexcept { return residual_; }

private:
    std::string relation_;
    double residual_;
};

class RealityViolation : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class QuadratureFailure : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class DefinitenessError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class ConvergenceFailure : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class BoundaryError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class Overflow : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class ZeroDivision : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace tra
