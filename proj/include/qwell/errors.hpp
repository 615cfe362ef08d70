#pragma once

#include <stdexcept>
#include <string>

namespace qwell {

/// Base class for all errors thrown by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad argument values (non-positive lengths, too-coarse grids, ...).
class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& msg) : Error(msg) {}
};

/// Bad run configuration (missing keys, out-of-range tolerances, ...).
class InvalidConfiguration : public Error {
public:
    explicit InvalidConfiguration(const std::string& msg) : Error(msg) {}
};

/// Zero pivot met while factorizing a tridiagonal system.
class SingularSystem : public Error {
public:
    explicit SingularSystem(const std::string& msg) : Error(msg) {}
};

/// Eigensolver breakdown; carries the level that failed.
class NumericalFailure : public Error {
public:
    NumericalFailure(const std::string& msg, int level_index)
        : Error(msg), level(level_index) {}
    int level;
};

/// Level truncation could not be certified with the available spectrum.
/// `required` is the number of levels estimated to suffice.
class NeedsMoreLevels : public Error {
public:
    NeedsMoreLevels(const std::string& msg, int required_levels)
        : Error(msg), required(required_levels) {}
    int required;
};

/// Iterative solver ran out of iterations; carries the last residual.
class NonConvergence : public Error {
public:
    NonConvergence(const std::string& msg, double last_residual)
        : Error(msg), residual(last_residual) {}
    double residual;
};

/// Computational domain too short to confine the state; carries a suggestion.
class TruncationTooSmall : public Error {
public:
    TruncationTooSmall(const std::string& msg, double suggested_length)
        : Error(msg), suggested(suggested_length) {}
    double suggested;
};

/// Chemical-potential bracket could not be grown to enclose the constraint.
class InfeasibleConstraint : public Error {
public:
    explicit InfeasibleConstraint(const std::string& msg) : Error(msg) {}
};

/// Not enough usable samples in a fitting window.
class FitWindowError : public Error {
public:
    explicit FitWindowError(const std::string& msg) : Error(msg) {}
};

/// Every point of a sweep failed.
class SweepFailure : public Error {
public:
    explicit SweepFailure(const std::string& msg) : Error(msg) {}
};

/// File I/O failure; carries the path.
class IoError : public Error {
public:
    IoError(const std::string& msg, std::string file_path)
        : Error(msg), path(std::move(file_path)) {}
    std::string path;
};

} // namespace qwell
