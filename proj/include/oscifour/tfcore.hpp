//============================================================================
// tfcore.hpp
//
// The closed-form oscillatory solver.  For a semi-linear system written in
// the rotating frame as
//
//     y'(t) = f(omega*t, y),     f 2pi-periodic in its angle argument,
//
// the solver builds, by d refinement passes, coefficients y_{k,j} of the
// approximant
//
//     y(t) ~ t^{d+1} y_{0,d+1} + sum_{k=-M}^{M} e^{i k omega t}
//                                 sum_{j=0}^{d} t^j y_{k,j},
//
// a trig polynomial in the fast angle omega*t with Taylor-polynomial
// coefficients in t.  Each pass is a Picard-type update done exactly in
// closed form:
//
//   Step 1  evaluate the current approximant's degree slices at the 2M
//           nodes theta_n = n*pi/M (inverse DFT per component and degree),
//   Step 2  push the jets through f at each node (series arithmetic),
//   Step 3  re-expand the result in modes (forward DFT per degree),
//   Step 4  integrate the trig/Taylor integrand exactly in closed form
//           (the quadrature recursion below), which raises the Taylor
//           degree by one.
//
// Degree bookkeeping: an object "at degree delta" stores Taylor slots
// j = 0..delta+1 with only the mean mode (k=0) occupying the top slot; the
// pass from degree delta evaluates full jets of degree delta+1 and returns
// an object at degree delta+1.  After d passes from the constant start the
// tensor has shape D x (d+2) x (2M+1).
//
// Error accuracy is uniform in omega: all omega-dependence enters through
// exact phase factors and exact 1/(i k omega) quadrature divisions.
//============================================================================
#pragma once

#include "oscifour/errors.hpp"
#include "oscifour/fourier.hpp"
#include "oscifour/tps.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace oscifour {

//--- configuration -------------------------------------------------------------

struct TFConfig {
    int M = 0;          // Fourier truncation, modes k = -M..M
    int d = 0;          // target Taylor degree, >= 1
    double omega = 0.0; // base frequency (rad per unit time), > 0
    int dim = 0;        // state dimension D

    // Throws ConfigError unless M >= 1, d >= 1, omega > 0, dim >= 1.
    void validate() const;
};

//--- dense tensors --------------------------------------------------------------

// Dense (component, degree-slot, mode) tensor; the mode index k runs
// -M..M and is stored contiguously per (component, slot) slice.
struct CoeffTensor {
    int dim = 0;
    int slots = 0; // number of Taylor slots (top degree + 1)
    int M = 0;

    std::vector<cplx> v; // size dim * slots * (2M+1)

    CoeffTensor() = default;
    CoeffTensor(int dim_, int slots_, int M_)
        : dim(dim_), slots(slots_), M(M_),
          v(static_cast<std::size_t>(dim_) * slots_ * (2 * M_ + 1)) {}

    std::size_t index(int c, int j, int k) const {
        return (static_cast<std::size_t>(c) * slots + j) * (2 * M + 1) + (k + M);
    }
    cplx& at(int c, int j, int k) { return v[index(c, j, k)]; }
    const cplx& at(int c, int j, int k) const { return v[index(c, j, k)]; }

    // Contiguous mode run k = -M..M for one (component, slot) pair.
    cplx* slice(int c, int j) { return v.data() + index(c, j, -M); }
    const cplx* slice(int c, int j) const { return v.data() + index(c, j, -M); }
};

// Jet coefficients at the 2M nodes, laid out node-major so each node's
// jets are contiguous: entry (n, c, j) at ((n*dim + c)*slots + j).
struct NodeValues {
    int dim = 0;
    int slots = 0;
    int count = 0; // 2M

    std::vector<cplx> v;

    NodeValues() = default;
    NodeValues(int dim_, int slots_, int count_)
        : dim(dim_), slots(slots_), count(count_),
          v(static_cast<std::size_t>(dim_) * slots_ * count_) {}

    cplx* jet(int n, int c) {
        return v.data() + (static_cast<std::size_t>(n) * dim + c) * slots;
    }
    const cplx* jet(int n, int c) const {
        return v.data() + (static_cast<std::size_t>(n) * dim + c) * slots;
    }
};

//--- solver state ----------------------------------------------------------------

struct TFCoefficients {
    TFConfig config;       // config.d is the target degree of the solve
    int degree = 0;        // current degree label; y.slots == degree + 2
    CoeffTensor y;         // dim x (degree+2) x (2M+1)
    std::vector<cplx> y0;  // initial condition, dim entries

    cplx& at(int c, int j, int k) { return y.at(c, j, k); }
    const cplx& at(int c, int j, int k) const { return y.at(c, j, k); }
};

//--- the field interface -----------------------------------------------------------

// A 2pi-periodic oscillatory field f(theta, y).  eval_jet must produce the
// degree-m Taylor truncation of t -> f(theta, y(t)) when fed degree-m jets
// y(t); the solver calls it with every degree from 1 up to the target d.
class OscillatoryField {
public:
    virtual ~OscillatoryField() = default;

    virtual int dim() const = 0;

    // y and out each hold dim() series of equal degree; out must not alias y.
    virtual void eval_jet(double theta, std::span<const TruncSeries> y,
                          std::span<TruncSeries> out) const = 0;

    // True when trajectories with real initial data stay real (conjugate
    // mode symmetry is then a testable property of solver output).
    virtual bool real_domain() const { return false; }
};

//--- solver entry points --------------------------------------------------------------

struct SolveOptions {
    int threads = 1;      // worker cap for the node loop in Step 2
    int extra_passes = 0; // experimental: repeat the final-degree pass for
                          // fixed-point polishing (default off)
};

// The constant start: y_{0,0} = y0, everything else zero, degree label 0.
TFCoefficients tf_initial(std::span<const cplx> y0, const TFConfig& cfg);

// One refinement pass (Steps 1-4).  `current` must be at degree delta with
// delta+1 <= cfg.d and carry the same M/omega/dim as cfg.
TFCoefficients tf_pass(const OscillatoryField& field,
                       const TFCoefficients& current, const TFConfig& cfg,
                       int threads = 1);

// Step 4 alone: exact closed-form antiderivative of the trig/Taylor
// integrand z (slots 0..q), offset so the value at t=0 is y0:
//   k != 0:  y_{k,q+1} = 0,  y_{k,j} = (z_{k,j} - (j+1) y_{k,j+1})/(i k omega)
//   k == 0:  y_{0,j+1} = z_{0,j}/(j+1)
//   then     y_{0,0} = y0 - sum_{k != 0} y_{k,0}.
TFCoefficients quadrature_step(const CoeffTensor& z, std::span<const cplx> y0,
                               const TFConfig& cfg);

// Full solve: d passes from the constant start (plus optional experimental
// repeats).  Throws DivergenceError naming the pass that went non-finite.
TFCoefficients tf_solve(const OscillatoryField& field, std::span<const cplx> y0,
                        const TFConfig& cfg, const SolveOptions& opts = {});

//--- evaluation -------------------------------------------------------------------------

// Value of the approximant at time t (Horner in t per mode, then direct
// phase summation over k).  tf_eval(c, 0) reproduces y0 to machine precision.
std::vector<cplx> tf_eval(const TFCoefficients& c, double t);

// Applies the problem's linear flow on top: x(t) = e^{t omega A} y(t).
// `linear_exp(theta, v)` must apply e^{theta A} to v in place.
using LinearExp = std::function<void(double theta, std::span<cplx> v)>;
std::vector<cplx> tf_eval_x(const LinearExp& linear_exp, const TFCoefficients& c,
                            double t);

//--- serialization -----------------------------------------------------------------------

// Binary container (all integers and doubles little-endian):
//   magic "OTF1", u32 format version, u32 D, u32 M, u32 d, f64 omega,
//   u32 id length, id bytes, then y0 and the tensor in (component, j, k)
//   order, each complex number as two doubles (re, im).
// A human-readable sidecar `<path>.meta` mirrors the header fields as
// key=value lines.
void tf_save(const TFCoefficients& c, const std::string& path,
             const std::string& problem_id);

struct LoadedCoefficients {
    TFCoefficients coeffs;
    std::string problem_id;
};
LoadedCoefficients tf_load(const std::string& path);

} // namespace oscifour
