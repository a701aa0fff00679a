//============================================================================
// commands.hpp
//
// The four operations behind the command-line driver, callable as library
// functions so tests can run them in-process.  Each command takes a parsed
// RunConfig, writes its data product (coefficient container or CSV), and
// prints a one-line summary to `log`.  Failures are thrown: ConfigError for
// inconsistent settings, DivergenceError/OracleError from the solvers, and
// IoError for unreadable/unwritable files; the driver maps those onto exit
// codes.
//
//   solve     tf_solve the configured problem, save coefficients + sidecar
//   eval      load a coefficient container, tabulate the trajectory as CSV
//             (slow variables plus problem-mapped observables)
//   errors    TF approximant vs adaptive reference, CSV of error curves;
//             with `epsilons` set (nls), one curve per epsilon where each
//             epsilon means omega = epsilon^-2 with unit-height step data
//             and node errors scaled by epsilon
//   averaged  slow-flow/periodic-map composition vs direct evaluation, CSV
//             of energy error and position difference
//
// CSV values are written with 17 significant digits so parsing them back
// reproduces the computed doubles bit for bit.
//============================================================================
#pragma once

#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "oscifour/config.hpp"
#include "oscifour/problems.hpp"
#include "oscifour/reference.hpp"
#include "oscifour/tfcore.hpp"

namespace oscifour {

// A problem instantiated from a RunConfig: the oscillatory field with its
// initial slow-variable data and frequency, plus the hooks the commands
// need to map slow variables back to observables.
struct Problem {
    std::string id;  // human-readable tag stored in the file sidecar
    std::shared_ptr<const OscillatoryField> field;
    std::vector<cplx> y0;
    double omega = 1.0;
    LinearExp exp;                  // e^{theta A} action (identity when empty)
    PointwiseField pointwise;       // transformed field on plain vectors
    PointwiseField pointwise_clock; // kepler-j2 only: with t' = |u|^2 appended
    std::optional<KeplerState> kepler;
};

// Builds the field/initial data described by `cfg`.  Throws ConfigError on
// missing or inconsistent problem parameters (for kepler-j2 the frequency
// is derived from the orbit energy, so an `omega` override is rejected).
Problem build_problem(const RunConfig& cfg);

void cmd_solve(const RunConfig& cfg, std::ostream& log);
void cmd_eval(const RunConfig& cfg, std::ostream& log);
void cmd_errors(const RunConfig& cfg, std::ostream& log);
void cmd_averaged(const RunConfig& cfg, std::ostream& log);

} // namespace oscifour
