#pragma once

#include <stdexcept>
#include <string>

namespace fracmp {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter lies outside the mathematical domain of an operation (e.g. alpha not in (0,1)).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Invalid grid, problem or solver configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Two grid functions that must share a grid (and vector dimension) do not.
class GridMismatch : public Error {
public:
    using Error::Error;
};

/// An iterative linear solve failed to reach its tolerance.
class SolverError : public Error {
public:
    SolverError(const std::string& what, double residual)
        : Error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// No admissible mountain-pass radius could be found.
class GeometryError : public Error {
public:
    using Error::Error;
};

/// The solver produced a state contradicting the theory (e.g. nonpositive level at a critical point).
class InconsistencyError : public Error {
public:
    using Error::Error;
};

/// A hypothesis check failed; carries the hypothesis name and a serialized witness.
class HypothesisViolation : public Error {
public:
    HypothesisViolation(std::string hypothesis, std::string witness)
        : Error(hypothesis + " violated: " + witness),
          hypothesis_(std::move(hypothesis)),
          witness_(std::move(witness)) {}
    const std::string& hypothesis() const noexcept { return hypothesis_; }
    const std::string& witness() const noexcept { return witness_; }

private:
    std::string hypothesis_;
    std::string witness_;
};

} // namespace fracmp
