//============================================================================
// problems.hpp
//
// Built-in oscillatory fields for the solver core:
//
//   * LinearTestField   — closed-form forcing a e^{i k0 theta}, y-independent
//   * SemilinearField   — generic conjugated field  E(-theta) g(E(theta) y)
//   * NLSField          — spectral-collocation cubic Schrodinger system on a
//                         2J-point periodic grid, in Lawson-transformed form
//   * SSField           — perturbed two-body problem (oblateness term) in
//                         Kustaanheimo-Stiefel variables, variation-of-
//                         parameters form over the stacked (alpha, beta)
//
// plus the pointwise companions used by the reference integrator and the
// diagnostic maps (positions, velocities, physical time, energy).
//============================================================================
#pragma once

#include "oscifour/tfcore.hpp"

#include <array>
#include <functional>
#include <span>
#include <vector>

namespace oscifour {

//--- closed-form linear test model --------------------------------------------

// f(theta, y) = amplitude * e^{i mode theta}, independent of y.  The exact
// solution of y' = f(omega t, y) is elementary, which makes this the
// standard probe for the solver's exactness class.
class LinearTestField final : public OscillatoryField {
public:
    LinearTestField(cplx amplitude, int mode)
        : amplitude_(amplitude), mode_(mode) {}
    int dim() const override { return 1; }
    cplx value(double theta) const;
    void eval_jet(double theta, std::span<const TruncSeries> y,
                  std::span<TruncSeries> out) const override;

private:
    cplx amplitude_;
    int mode_;
};

//--- generic semi-linear conjugation ------------------------------------------

// In-place action of e^{theta A} on a vector of Taylor jets.
using JetExpAction = std::function<void(double theta, std::span<TruncSeries>)>;
// Nonlinearity on a vector of Taylor jets (out preallocated, same degree).
using JetMap =
    std::function<void(std::span<const TruncSeries>, std::span<TruncSeries>)>;

// f(theta, y) = E(-theta) g(E(theta) y) with E = exp_action.  The caller
// promises E(theta, .) is linear and E(0, .) is the identity.
class SemilinearField final : public OscillatoryField {
public:
    SemilinearField(int dim, JetExpAction exp_action, JetMap g);
    int dim() const override { return dim_; }
    void eval_jet(double theta, std::span<const TruncSeries> y,
                  std::span<TruncSeries> out) const override;

private:
    int dim_;
    JetExpAction exp_;
    JetMap g_;
};

SemilinearField semilinear_field(int dim, JetExpAction exp_action, JetMap g);

//--- cubic NLS on a periodic grid ----------------------------------------------

// Collocation of  i u_t + u_xx + |u|^2 u = 0  on x in [0, 2pi] with 2J
// points x_j = j pi / J.  State U_j ~ u(x_j); the linear part diagonalizes
// in Fourier space with purely imaginary eigenvalues
//   lambda_m = -i * min(m, 2J-m)^2          (FFT bin order m = 0..2J-1)
// and the solver works on the rotated variable W = e^{-tA} U.
struct NLSProblem {
    int J = 0;
    double epsilon = 1.0; // amplitude of the step-function initial data
    double omega = 1.0;   // base frequency of the rotated system
    std::vector<double> grid;  // x_j, j = 0..2J-1
    std::vector<cplx> lambda;  // eigenvalues in FFT bin order
    std::vector<cplx> initial; // U_j(0) = epsilon * eta(x_j)

    int dim() const { return 2 * J; }
};

// Grid, spectrum, and step-function initial data eta = -1 on [0, pi),
// +1 on [pi, 2pi].  omega = 1 solves the plain system; the
// frequency-sweep study passes omega = 1/epsilon_data^2 with unit data.
NLSProblem nls_build(int J, double epsilon, double omega = 1.0);

// e^{theta A} acting on jets (one FFT pair per Taylor-degree slice) and on
// plain grid vectors.  Both operate in place.
void nls_exp_action(const NLSProblem& p, double theta,
                    std::span<TruncSeries> w);
void nls_exp_action_pointwise(const NLSProblem& p, double theta,
                              std::span<cplx> v);

// Cubic nonlinearity g(U)_j = i |U_j|^2 U_j, componentwise on jets/values.
void nls_g(std::span<const TruncSeries> u, std::span<TruncSeries> out);
void nls_g_pointwise(std::span<const cplx> u, std::span<cplx> out);

// The rotated field f(theta, W) = e^{-theta A} g(e^{theta A} W).
class NLSField final : public OscillatoryField {
public:
    explicit NLSField(NLSProblem p);
    int dim() const override { return p_.dim(); }
    void eval_jet(double theta, std::span<const TruncSeries> y,
                  std::span<TruncSeries> out) const override;
    // Same map on plain vectors, for the reference integrator.
    void pointwise(double theta, std::span<const cplx> w,
                   std::span<cplx> out) const;
    // e^{theta A} as a LinearExp for full-state evaluation.
    LinearExp exp_map() const;
    const NLSProblem& problem() const { return p_; }

private:
    void exp_slices(double theta, std::span<TruncSeries> w) const;
    NLSProblem p_;
    Fft fft_;
};

//--- perturbed Kepler problem in KS variables -----------------------------------

struct KeplerConstants {
    double mu = 398600.44189;  // km^3/s^2
    double J2 = 1.08262668e-3; // Earth oblateness coefficient
    double Re = 6378.137;      // km

    double eps_J2() const { return J2 * mu * Re * Re; }
};

// Initial state converted to KS variables.  u is the 4-vector with
// |u|^2 = |q|, uprime its derivative in fictitious time, h the (positive)
// energy-like constant and omega = sqrt(h/2) the base frequency.
struct KeplerState {
    std::array<double, 3> q{}, qdot{};
    std::array<double, 4> u{}, uprime{};
    double h = 0.0;
    double omega = 0.0;
    double t0 = 0.0;
    double eps_J2 = 0.0;
};

// KS embedding of (q0, qdot0) at epoch t0.  Throws ConfigError when the
// position is at the origin or the orbit has h <= 0.
KeplerState ks_init(const std::array<double, 3>& q0,
                    const std::array<double, 3>& qdot0, double t0,
                    const KeplerConstants& k = {});

// Bilinear KS position map q = L(u) u, on numbers and on jets.
std::array<double, 3> ks_position(const std::array<double, 4>& u);
void ks_position_jet(std::span<const TruncSeries> u, std::span<TruncSeries> q);

// Velocity back-map  qdot = 2 L(u) u' / |u|^2.
std::array<double, 3> ks_velocity(const std::array<double, 4>& u,
                                  const std::array<double, 4>& uprime);

// Gradient of the perturbing function
//   R(u) = eps/(4 |u|^4) (3 sin^2(theta) - 1),
//   sin(theta) = 2 (u1 u3 + u2 u4) / |u|^2,
// as a jet map (series division, no transcendental calls) and pointwise.
void grad_R(std::span<const TruncSeries> u, double eps_J2,
            std::span<TruncSeries> out);
std::array<double, 4> grad_R_point(const std::array<double, 4>& u,
                                   double eps_J2);

// Variation-of-parameters field over stacked (alpha, beta):
//   alpha' =  sin(theta)/omega * grad R(u)
//   beta'  = -cos(theta)       * grad R(u)
//   u      =  cos(theta) alpha + sin(theta)/omega * beta,   theta = omega tau.
class SSField final : public OscillatoryField {
public:
    SSField(double eps_J2, double omega);
    int dim() const override { return 8; }
    void eval_jet(double theta, std::span<const TruncSeries> y,
                  std::span<TruncSeries> out) const override;
    // Plain-vector versions for the reference integrator; the _time variant
    // carries physical time as a ninth component with t' = |u|^2.
    void pointwise(double theta, std::span<const cplx> y,
                   std::span<cplx> out) const;
    void pointwise_time(double theta, std::span<const cplx> y,
                        std::span<cplx> out) const;
    // e^{theta A} mapping stacked (alpha, beta) to stacked (u, u').
    LinearExp exp_map() const;
    double omega() const { return omega_; }
    double eps_J2() const { return eps_; }
    bool real_domain() const override { return true; }

private:
    double eps_;
    double omega_;
};

// Recover (u, u') from (alpha, beta) coefficients at fictitious time tau.
void ss_state(const TFCoefficients& c, double tau, std::array<double, 4>& u,
              std::array<double, 4>& uprime);

// Physical time t(tau) = t0 + integral of |u(sigma)|^2:  the integrand is a
// trig polynomial of bandwidth 2M with Taylor degree 2(d+1), so it is
// captured exactly on a 4M-point grid and integrated in closed form.
// physical_time_coefficients returns the scalar antiderivative as its own
// coefficient set (evaluate with tf_eval); physical_time is the one-shot
// convenience wrapper.
TFCoefficients physical_time_coefficients(const TFCoefficients& c, double t0);
double physical_time(const TFCoefficients& c, double tau, double t0);

// Oblateness potential and total energy diagnostic
//   V(q) = eps/(2 r^3) (3 (z/r)^2 - 1),  E = |qdot|^2/2 - mu/r + V(q).
double kepler_V(const std::array<double, 3>& q, const KeplerConstants& k);
double kepler_energy(const std::array<double, 3>& q,
                     const std::array<double, 3>& qdot,
                     const KeplerConstants& k);

//--- named orbit presets ---------------------------------------------------------

// Initial states (km, km/s) used by the shipped experiment configurations:
// a geostationary satellite and a highly eccentric (e ~ 0.768) orbit.
KeplerState kepler_geostationary(const KeplerConstants& k = {});
KeplerState kepler_eccentric(const KeplerConstants& k = {});

} // namespace oscifour
