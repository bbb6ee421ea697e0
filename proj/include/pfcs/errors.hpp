// errors.hpp
// Exception hierarchy shared by all pfcs modules.

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace pfcs {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Caller misuse: mismatched geometries, bad argument ranges, bad subcommand input.
struct UsageError : Error {
    using Error::Error;
};

// Config file problems; carries a "section.field" path when known.
struct ConfigError : Error {
    explicit ConfigError(const std::string& msg, std::string where = {})
        : Error(where.empty() ? msg : where + ": " + msg), field(std::move(where)) {}
    std::string field;
};

// Input outside an operator's domain (e.g. nonzero-mean field passed to the
// inverse Neumann operator, or tau = 0 passed to the inertial vector field).
struct DomainError : UsageError {
    using UsageError::UsageError;
};

// Nonlinear solver gave up; keeps the final residual and iteration count.
struct SolverError : Error {
    SolverError(const std::string& msg, double residual_, int iterations_,
                std::vector<double> history_ = {})
        : Error(msg), residual(residual_), iterations(iterations_),
          residual_history(std::move(history_)) {}
    double residual;
    int iterations;
    std::vector<double> residual_history;
};

// Explicit step rejected by the stability guard; carries the admissible bound.
struct StepRejected : Error {
    StepRejected(double dt_, double bound_)
        : Error("time step " + std::to_string(dt_) +
                " exceeds stability guard " + std::to_string(bound_)),
          dt(dt_), bound(bound_) {}
    double dt;
    double bound;
};

} // namespace pfcs
