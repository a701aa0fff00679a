//============================================================================
// errors.hpp
//
// Exception hierarchy shared by all modules.  Each class maps onto one of
// the CLI exit codes so failures keep their category from the numerical
// kernels all the way out to the driver:
//
//   exit 2  ConfigError      -- bad option value, unknown key, shape mismatch
//   exit 3  DivergenceError  -- non-finite state produced by a solver pass
//   exit 4  OracleError      -- reference integrator could not meet its tol
//   exit 5  IoError          -- file cannot be read/written/parsed
//
// Plain argument mistakes (mixed-degree series arithmetic, bad index, ...)
// throw std::invalid_argument and are treated as programming errors, not
// runtime conditions.
//============================================================================
#pragma once

#include <stdexcept>
#include <string>

namespace oscifour {

// Invalid or inconsistent run configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A solver produced a non-finite value.  `pass_index` is the 1-based index
// of the refinement pass that first went non-finite (0 when not applicable).
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(const std::string& what, int pass_index_ = 0)
        : std::runtime_error(what), pass_index(pass_index_) {}
    int pass_index;
};

// The reference integrator failed (step size underflow, tolerance not met).
class OracleError : public std::runtime_error {
public:
    explicit OracleError(const std::string& what) : std::runtime_error(what) {}
};

// File I/O or parse failure.  `offset` is the byte offset of the first bad
// byte for binary parse errors (-1 when unknown / not applicable).
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what, long long offset_ = -1)
        : std::runtime_error(what), offset(offset_) {}
    long long offset;
};

// Reciprocal of a truncated series whose constant term vanishes.
class SingularSeriesError : public std::runtime_error {
public:
    explicit SingularSeriesError(const std::string& what)
        : std::runtime_error(what) {}
};

} // namespace oscifour
