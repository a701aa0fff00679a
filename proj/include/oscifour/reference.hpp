//============================================================================
// reference.hpp
//
// Independent oracle for the oscillatory systems: an adaptive embedded
// Runge-Kutta 5(4) integrator for y' = f(omega t, y), plus error metrics
// comparing trig/Taylor approximants against a reference run.
//
// The integrator works on the transformed (slow) system, not the stiff
// original: the caller hands in the same rotating-frame field the series
// solver consumes, evaluated on plain vectors.
//============================================================================
#pragma once

#include "oscifour/errors.hpp"
#include "oscifour/tfcore.hpp"

#include <functional>
#include <span>
#include <vector>

namespace oscifour {

// Plain-vector right-hand side: out = f(theta, y).  Must not alias.
using PointwiseField =
    std::function<void(double theta, std::span<const cplx> y,
                       std::span<cplx> out)>;

struct RKStats {
    long long accepted = 0; // accepted steps
    long long rejected = 0; // rejected attempts
    long long evals = 0;    // right-hand-side evaluations
};

// Reference trajectory sampled at requested times (strictly increasing).
struct ReferenceSolution {
    std::vector<double> times;
    std::vector<std::vector<cplx>> states;
    double tol = 0.0;
    RKStats stats;
};

// Integrate y' = f(omega t, y) from t = 0 to t_end >= 0 with the 7-stage
// Dormand-Prince 5(4) pair, PI step-size control (safety 0.9, growth clamp
// [0.2, 5]) and mixed absolute/relative tolerance atol = rtol = tol.
//
// Sample times are sorted, deduplicated, and hit exactly by clipping steps,
// so recorded states carry no interpolation error.  An empty sample list
// records t_end alone.  Requirements: tol in [1e-14, 1e-2], t_end finite
// and nonnegative, samples within [0, t_end] (ConfigError otherwise).
// Throws OracleError when the step size underflows (accuracy/stiffness
// failure) and DivergenceError when the state leaves the finite range.
ReferenceSolution rk_solve(const PointwiseField& f, std::span<const cplx> y0,
                           double omega, double t_end, double tol,
                           std::span<const double> sample_times = {});

// Error metrics for comparing an approximant against a reference run at the
// reference's sample times.
//
//   component_max      max_i |y_tf,i(t) - y_ref,i(t)|; dimensions must match
//                      (a 9-component reference carrying physical time as its
//                      last entry is compared on the leading 8).
//   position_relative  relative Euclidean distance of mapped positions for
//                      stacked (alpha, beta) coefficient sets: both states
//                      are rotated to (u, u') at angle omega*t and pushed
//                      through the quaternion-square position map.
//   physical_time      |t_tf(tau) - t_ref(tau)| where the reference tracks
//                      physical time as a ninth component; both clocks must
//                      share the epoch t(0) = 0.
enum class ErrorMetric { component_max, position_relative, physical_time };

struct ErrorPoint {
    double t = 0.0;
    double value = 0.0;
};

std::vector<ErrorPoint> error_curve(const TFCoefficients& c,
                                    const ReferenceSolution& ref,
                                    ErrorMetric metric);

} // namespace oscifour
