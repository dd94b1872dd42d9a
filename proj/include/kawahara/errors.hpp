#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kawahara {

/// Invalid user-supplied configuration (bad field, constraint violation).
/// The CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// API misuse: mismatched grids, out-of-range modes, stale factorization.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Base of every failure that comes out of the numerics (exit code 1).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SolverError : public NumericalError {
public:
    SolverError(const std::string& what, double residual)
        : NumericalError(what), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// Non-finite values produced by a step. Carries where it happened.
class DivergenceError : public NumericalError {
public:
    DivergenceError(const std::string& what, std::size_t step, double t)
        : NumericalError(what), step_(step), time_(t) {}

    std::size_t step() const noexcept { return step_; }
    double time() const noexcept { return time_; }

private:
    std::size_t step_;
    double time_;
};

class LedgerViolation : public NumericalError {
public:
    LedgerViolation(const std::string& what, std::size_t step, double t)
        : NumericalError(what), step_(step), time_(t) {}

    std::size_t step() const noexcept { return step_; }
    double time() const noexcept { return time_; }

private:
    std::size_t step_;
    double time_;
};

class CflViolation : public NumericalError {
public:
    using NumericalError::NumericalError;
};

} // namespace kawahara
