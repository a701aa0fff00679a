//============================================================================
// averaging.hpp
//
// Averaged-dynamics views over trig/Taylor coefficient sets.
//
// A solved coefficient set encodes three maps of the underlying slow
// dynamics, read off without further computation:
//
//   map_U(c, theta)  the phase section  sum_k e^{ik theta} y_{k,0} — how the
//                    solution depends on the fast angle at slow time 0;
//   map_W(c, t)      the slow section  t^{d+1} y_{0,d+1}
//                    + sum_j t^j (sum_k y_{k,j}) — the solution with the
//                    fast angle frozen at 0, a polynomial of degree <= d+1;
//   map_F(c)         the slow vector field  sum_k y_{k,1}, the exact
//                    derivative of map_W at t = 0.
//
// averaged_compose chains them: advance the slow flow to time t, then apply
// the phase section at theta = omega t from a fresh solve started at the
// advanced point.  At theta = 2 pi n the composition approximates the
// original trajectory.
//============================================================================
#pragma once

#include "oscifour/tfcore.hpp"

#include <span>
#include <vector>

namespace oscifour {

// Phase section at angle theta (exact trig-polynomial evaluation of the
// degree-0 slice).  map_U(c, 0) reproduces y0 to rounding.
std::vector<cplx> map_U(const TFCoefficients& c, double theta);

// Slow section at time t (polynomial of degree <= degree+1 in t).
// map_W(c, 0) = y0 exactly.
std::vector<cplx> map_W(const TFCoefficients& c, double t);

// Slow vector field at y0.  Requires at least one refinement pass
// (degree >= 1); throws ConfigError otherwise.
std::vector<cplx> map_F(const TFCoefficients& c);

// Composed approximation at time t: solve from y0, advance the slow section
// to t, re-solve from that point, and read the phase section at omega t.
// The overload taking `base` skips the first solve when the caller already
// holds it (same semantics; the base must come from the same field/config).
std::vector<cplx> averaged_compose(const OscillatoryField& field,
                                   const TFConfig& cfg,
                                   std::span<const cplx> y0, double t,
                                   const SolveOptions& opts = {});
std::vector<cplx> averaged_compose(const OscillatoryField& field,
                                   const TFCoefficients& base, double t,
                                   const SolveOptions& opts = {});

} // namespace oscifour
