#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace plasmon {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Evaluation requested outside a tabulated range (no extrapolation).
class OutOfRangeError : public Error {
public:
    using Error::Error;
};

/// Malformed input data. `row` is the 1-based data row (0 for the header).
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t row)
        : Error("row " + std::to_string(row) + ": " + what), row_(row) {}
    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

/// Adaptive quadrature ran out of panels before meeting its tolerance.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double estimate)
        : Error(what), estimate_(estimate) {}
    double error_estimate() const noexcept { return estimate_; }

private:
    double estimate_;
};

/// Inconsistent or unsupported run configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A numerical invariant was violated during a computation.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Operation not available for the requested emitter count.
class UnsupportedError : public Error {
public:
    using Error::Error;
};

}  // namespace plasmon
