//============================================================================
// config.hpp
//
// Run configuration for the command-line driver.  A run is described by a
// flat `key = value` text file; trailing `key=value` arguments override the
// file.  Full-line comments start with '#', blank lines are skipped, and a
// key may appear at most once per file (overrides may repeat; the last one
// wins).  Unknown keys, keys that belong to a different problem family, and
// malformed or out-of-range values are rejected with a message naming the
// key and where it came from (file:line or "override").
//
// Key vocabulary
//   common       problem, M, d, omega, t_start, t_end, revolutions, t_count,
//                times, tol, metric, threads, out, coefficients
//   linear-test  amplitude_re, amplitude_im, mode, y0_re, y0_im
//   nls          J, epsilon, epsilons
//   kepler-j2    orbit, q0_x, q0_y, q0_z, qdot0_x, qdot0_y, qdot0_z,
//                mu, j2, re
//
// Time grids come either from an explicit `times` list (comma separated) or
// from t_start/t_end/t_count; `revolutions = N` may replace t_end, meaning
// N periods of length P = 2*pi/omega.  The two styles may not be mixed.
//============================================================================
#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "oscifour/problems.hpp"
#include "oscifour/tps.hpp"

namespace oscifour {

struct RunConfig {
    // problem selection: linear-test | nls | kepler-j2
    std::string problem;

    // linear-test: f(theta, y) = amplitude * e^{i mode theta}, start y0
    cplx amplitude{1.0, 0.0};
    int mode = 1;
    cplx y0{0.0, 0.0};

    // nls: 2J collocation nodes, step data of height epsilon
    int J = 0;
    double epsilon = 1.0;

    // kepler-j2: named orbit preset or a custom state vector (km, km/s)
    std::string orbit = "geostationary"; // geostationary | eccentric | custom
    std::array<double, 3> q0{};
    std::array<double, 3> qdot0{};
    KeplerConstants constants{};

    // discretization (0 = not set; commands that solve require both >= 1)
    int M = 0;
    int d = 0;
    std::optional<double> omega; // overrides the problem's own frequency

    // time grid
    double t_start = 0.0;
    std::optional<double> t_end;
    std::optional<double> revolutions; // t_end = revolutions * 2*pi/omega
    int t_count = 50;
    std::vector<double> times; // explicit list; wins over the grid keys

    // reference oracle and error study
    double tol = 1e-12;
    std::string metric = "auto"; // auto | max | position | time | all
    std::vector<double> epsilons; // nls frequency study: one series per value

    // execution and output
    int threads = 1;
    std::string out;          // output path (command-dependent default)
    std::string coefficients; // input coefficient container for `eval`
};

// Parse the file at `path`, then apply `overrides` (each "key=value") in
// order.  Throws IoError when the file cannot be read and ConfigError for
// any content problem.
RunConfig parse_config(const std::string& path,
                       std::span<const std::string> overrides = {});

// Same, from in-memory text; `origin` names the source in error messages.
RunConfig parse_config_text(const std::string& text, const std::string& origin,
                            std::span<const std::string> overrides = {});

// The evaluation/sampling grid: either the sorted, deduplicated `times`
// list, or count points evenly spaced on [t_start, t_end] (t_end resolved
// from `revolutions` with period 2*pi/omega when given that way).  Throws
// ConfigError when neither style is configured or the span is empty.
std::vector<double> config_time_grid(const RunConfig& cfg, double omega);

} // namespace oscifour
