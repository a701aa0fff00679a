//============================================================================
// problems.cpp
//
// Built-in oscillatory fields and their pointwise/diagnostic companions.
//============================================================================
#include "oscifour/problems.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace oscifour {

namespace {

const cplx kI(0.0, 1.0);

void require_span(std::size_t got, std::size_t want, const char* where) {
    if (got != want)
        throw std::invalid_argument(std::string(where) + ": span holds " +
                                    std::to_string(got) + " entries, expected " +
                                    std::to_string(want));
}

void zero_series(TruncSeries& s) {
    std::fill(s.data(), s.data() + s.degree() + 1, cplx(0.0));
}

} // namespace

//--- LinearTestField -------------------------------------------------------------

cplx LinearTestField::value(double theta) const {
    const double arg = static_cast<double>(mode_) * theta;
    return amplitude_ * cplx(std::cos(arg), std::sin(arg));
}

void LinearTestField::eval_jet(double theta, std::span<const TruncSeries> y,
                               std::span<TruncSeries> out) const {
    require_span(y.size(), 1, "LinearTestField::eval_jet");
    require_span(out.size(), 1, "LinearTestField::eval_jet");
    zero_series(out[0]);
    out[0][0] = value(theta);
}

//--- SemilinearField -------------------------------------------------------------

SemilinearField::SemilinearField(int dim, JetExpAction exp_action, JetMap g)
    : dim_(dim), exp_(std::move(exp_action)), g_(std::move(g)) {
    if (dim_ < 1)
        throw ConfigError("semilinear field dimension must be >= 1, got " +
                          std::to_string(dim_));
    if (!exp_ || !g_)
        throw ConfigError("semilinear field needs both an exp action and a "
                          "nonlinearity");
}

void SemilinearField::eval_jet(double theta, std::span<const TruncSeries> y,
                               std::span<TruncSeries> out) const {
    require_span(y.size(), static_cast<std::size_t>(dim_),
                 "SemilinearField::eval_jet");
    require_span(out.size(), static_cast<std::size_t>(dim_),
                 "SemilinearField::eval_jet");
    std::vector<TruncSeries> staged(y.begin(), y.end());
    exp_(theta, staged);
    g_(staged, out);
    exp_(-theta, out);
}

SemilinearField semilinear_field(int dim, JetExpAction exp_action, JetMap g) {
    return SemilinearField(dim, std::move(exp_action), std::move(g));
}

//--- NLS ---------------------------------------------------------------------------

NLSProblem nls_build(int J, double epsilon, double omega) {
    if (J < 2)
        throw ConfigError("nls requires J >= 2, got " + std::to_string(J));
    if (!(omega > 0.0) || !std::isfinite(omega))
        throw ConfigError("nls omega must be a positive finite real");
    if (!std::isfinite(epsilon))
        throw ConfigError("nls epsilon must be finite");
    NLSProblem p;
    p.J = J;
    p.epsilon = epsilon;
    p.omega = omega;
    const int n = 2 * J;
    p.grid.resize(static_cast<std::size_t>(n));
    p.lambda.resize(static_cast<std::size_t>(n));
    p.initial.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        p.grid[static_cast<std::size_t>(j)] = static_cast<double>(j) * M_PI /
                                              static_cast<double>(J);
        const int mhat = std::min(j, n - j);
        p.lambda[static_cast<std::size_t>(j)] =
            cplx(0.0, -static_cast<double>(mhat) * static_cast<double>(mhat));
        // Step data: -1 left of x = pi, +1 from x = pi on.
        p.initial[static_cast<std::size_t>(j)] =
            (j < J) ? cplx(-epsilon, 0.0) : cplx(epsilon, 0.0);
    }
    return p;
}

namespace {

// Diagonal phases e^{theta lambda_m}; lambda is purely imaginary so these
// are unit-modulus rotations.
std::vector<cplx> nls_phases(const NLSProblem& p, double theta) {
    std::vector<cplx> ph(p.lambda.size());
    for (std::size_t m = 0; m < ph.size(); ++m) {
        const double arg = p.lambda[m].imag() * theta;
        ph[m] = cplx(std::cos(arg), std::sin(arg));
    }
    return ph;
}

void nls_exp_slices(const NLSProblem& p, double theta,
                    std::span<TruncSeries> w, const Fft& fft) {
    const std::size_t n = static_cast<std::size_t>(p.dim());
    require_span(w.size(), n, "nls_exp_action");
    if (n == 0) return;
    const std::vector<cplx> ph = nls_phases(p, theta);
    const int deg = w[0].degree();
    std::vector<cplx> line(n);
    for (int j = 0; j <= deg; ++j) {
        for (std::size_t g = 0; g < n; ++g) line[g] = w[g][j];
        fft.forward(line.data());
        for (std::size_t m = 0; m < n; ++m) line[m] *= ph[m];
        fft.inverse(line.data());
        for (std::size_t g = 0; g < n; ++g) w[g][j] = line[g];
    }
}

void nls_exp_points(const NLSProblem& p, double theta, std::span<cplx> v,
                    const Fft& fft) {
    const std::size_t n = static_cast<std::size_t>(p.dim());
    require_span(v.size(), n, "nls_exp_action_pointwise");
    const std::vector<cplx> ph = nls_phases(p, theta);
    fft.forward(v.data());
    for (std::size_t m = 0; m < n; ++m) v[m] *= ph[m];
    fft.inverse(v.data());
}

} // namespace

void nls_exp_action(const NLSProblem& p, double theta,
                    std::span<TruncSeries> w) {
    const Fft fft(static_cast<std::size_t>(p.dim()));
    nls_exp_slices(p, theta, w, fft);
}

void nls_exp_action_pointwise(const NLSProblem& p, double theta,
                              std::span<cplx> v) {
    const Fft fft(static_cast<std::size_t>(p.dim()));
    nls_exp_points(p, theta, v, fft);
}

void nls_g(std::span<const TruncSeries> u, std::span<TruncSeries> out) {
    require_span(out.size(), u.size(), "nls_g");
    if (u.empty()) return;
    const int deg = u[0].degree();
    TruncSeries conj_u(deg), mag2(deg);
    for (std::size_t g = 0; g < u.size(); ++g) {
        ts_conj_into(u[g], conj_u);
        ts_mul_into(u[g], conj_u, mag2);
        ts_mul_into(mag2, u[g], out[g]);
        for (int j = 0; j <= deg; ++j) out[g][j] *= kI;
    }
}

void nls_g_pointwise(std::span<const cplx> u, std::span<cplx> out) {
    require_span(out.size(), u.size(), "nls_g_pointwise");
    for (std::size_t g = 0; g < u.size(); ++g)
        out[g] = kI * std::norm(u[g]) * u[g];
}

NLSField::NLSField(NLSProblem p)
    : p_(std::move(p)), fft_(static_cast<std::size_t>(p_.dim())) {}

void NLSField::exp_slices(double theta, std::span<TruncSeries> w) const {
    nls_exp_slices(p_, theta, w, fft_);
}

void NLSField::eval_jet(double theta, std::span<const TruncSeries> y,
                        std::span<TruncSeries> out) const {
    require_span(y.size(), static_cast<std::size_t>(p_.dim()),
                 "NLSField::eval_jet");
    require_span(out.size(), static_cast<std::size_t>(p_.dim()),
                 "NLSField::eval_jet");
    std::vector<TruncSeries> staged(y.begin(), y.end());
    exp_slices(theta, staged);
    nls_g(staged, out);
    exp_slices(-theta, out);
}

void NLSField::pointwise(double theta, std::span<const cplx> w,
                         std::span<cplx> out) const {
    require_span(w.size(), static_cast<std::size_t>(p_.dim()),
                 "NLSField::pointwise");
    require_span(out.size(), static_cast<std::size_t>(p_.dim()),
                 "NLSField::pointwise");
    std::vector<cplx> staged(w.begin(), w.end());
    nls_exp_points(p_, theta, staged, fft_);
    nls_g_pointwise(staged, out);
    nls_exp_points(p_, -theta, out, fft_);
}

LinearExp NLSField::exp_map() const {
    return [this](double theta, std::span<cplx> v) {
        nls_exp_points(p_, theta, v, fft_);
    };
}

//--- Kepler: KS embedding ----------------------------------------------------------

namespace {

double norm3(const std::array<double, 3>& v) {
    return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
}

} // namespace

KeplerState ks_init(const std::array<double, 3>& q0,
                    const std::array<double, 3>& qdot0, double t0,
                    const KeplerConstants& k) {
    const double r0 = norm3(q0);
    if (!(r0 > 0.0))
        throw ConfigError("initial position is at the origin (singular)");
    const double x0 = q0[0], y0 = q0[1], z0 = q0[2];

    KeplerState s;
    s.q = q0;
    s.qdot = qdot0;
    s.t0 = t0;
    s.eps_J2 = k.eps_J2();

    std::array<double, 4>& u = s.u;
    if (x0 >= 0.0) {
        u[0] = 0.5 * std::sqrt(r0 + x0);
        u[3] = u[0];
        u[1] = (y0 * u[0] + z0 * u[3]) / (r0 + x0);
        u[2] = (z0 * u[0] - y0 * u[3]) / (r0 + x0);
    } else {
        u[1] = 0.5 * std::sqrt(r0 - x0);
        u[2] = u[1];
        u[0] = (y0 * u[1] + z0 * u[2]) / (r0 - x0);
        u[3] = (z0 * u[1] - y0 * u[2]) / (r0 - x0);
    }

    // u' = L(u)^T qdot / 2.
    s.uprime[0] = 0.5 * (u[0] * qdot0[0] + u[1] * qdot0[1] + u[2] * qdot0[2]);
    s.uprime[1] = 0.5 * (-u[1] * qdot0[0] + u[0] * qdot0[1] + u[3] * qdot0[2]);
    s.uprime[2] = 0.5 * (-u[2] * qdot0[0] - u[3] * qdot0[1] + u[0] * qdot0[2]);
    s.uprime[3] = 0.5 * (u[3] * qdot0[0] - u[2] * qdot0[1] + u[1] * qdot0[2]);

    const double v2 = qdot0[0] * qdot0[0] + qdot0[1] * qdot0[1] +
                      qdot0[2] * qdot0[2];
    s.h = k.mu / r0 - 0.5 * v2 - kepler_V(q0, k);
    if (!(s.h > 0.0))
        throw ConfigError("orbit has h <= 0 (not an elliptic-type state); "
                          "only h > 0 is supported");
    s.omega = std::sqrt(0.5 * s.h);
    return s;
}

std::array<double, 3> ks_position(const std::array<double, 4>& u) {
    return {u[0] * u[0] - u[1] * u[1] - u[2] * u[2] + u[3] * u[3],
            2.0 * (u[0] * u[1] - u[2] * u[3]),
            2.0 * (u[0] * u[2] + u[1] * u[3])};
}

void ks_position_jet(std::span<const TruncSeries> u,
                     std::span<TruncSeries> q) {
    require_span(u.size(), 4, "ks_position_jet");
    require_span(q.size(), 3, "ks_position_jet");
    const int deg = u[0].degree();
    TruncSeries tmp(deg);

    // x = u1^2 - u2^2 - u3^2 + u4^2
    ts_mul_into(u[0], u[0], q[0]);
    ts_mul_into(u[1], u[1], tmp);
    ts_axpy(cplx(-1.0), tmp, q[0]);
    ts_mul_into(u[2], u[2], tmp);
    ts_axpy(cplx(-1.0), tmp, q[0]);
    ts_mul_into(u[3], u[3], tmp);
    ts_axpy(cplx(1.0), tmp, q[0]);

    // y = 2 (u1 u2 - u3 u4)
    ts_mul_into(u[0], u[1], q[1]);
    ts_mul_into(u[2], u[3], tmp);
    ts_axpy(cplx(-1.0), tmp, q[1]);
    for (int j = 0; j <= deg; ++j) q[1][j] *= 2.0;

    // z = 2 (u1 u3 + u2 u4)
    ts_mul_into(u[0], u[2], q[2]);
    ts_mul_into(u[1], u[3], tmp);
    ts_axpy(cplx(1.0), tmp, q[2]);
    for (int j = 0; j <= deg; ++j) q[2][j] *= 2.0;
}

std::array<double, 3> ks_velocity(const std::array<double, 4>& u,
                                  const std::array<double, 4>& up) {
    const double r = u[0] * u[0] + u[1] * u[1] + u[2] * u[2] + u[3] * u[3];
    if (!(r > 0.0))
        throw std::invalid_argument("ks_velocity: |u| vanishes");
    const double s = 2.0 / r;
    return {s * (u[0] * up[0] - u[1] * up[1] - u[2] * up[2] + u[3] * up[3]),
            s * (u[1] * up[0] + u[0] * up[1] - u[3] * up[2] - u[2] * up[3]),
            s * (u[2] * up[0] + u[3] * up[1] + u[0] * up[2] + u[1] * up[3])};
}

//--- Kepler: perturbing gradient ----------------------------------------------------

void grad_R(std::span<const TruncSeries> u, double eps_J2,
            std::span<TruncSeries> out) {
    require_span(u.size(), 4, "grad_R");
    require_span(out.size(), 4, "grad_R");
    const int deg = u[0].degree();
    if (eps_J2 == 0.0) {
        for (auto& s : out) zero_series(s);
        return;
    }

    TruncSeries s2(deg), tmp(deg);
    // |u|^2
    ts_mul_into(u[0], u[0], s2);
    for (int i = 1; i < 4; ++i) {
        ts_mul_into(u[static_cast<std::size_t>(i)],
                    u[static_cast<std::size_t>(i)], tmp);
        ts_axpy(cplx(1.0), tmp, s2);
    }
    const TruncSeries inv = ts_recip(s2); // throws when |u|^2 starts at 0

    // sin(theta) = 2 (u1 u3 + u2 u4) / |u|^2
    TruncSeries num(deg);
    ts_mul_into(u[0], u[2], num);
    ts_mul_into(u[1], u[3], tmp);
    ts_axpy(cplx(1.0), tmp, num);
    for (int j = 0; j <= deg; ++j) num[j] *= 2.0;
    const TruncSeries sin_t = ts_mul(num, inv);

    // 1 / |u|^6
    const TruncSeries inv3 = ts_mul(ts_mul(inv, inv), inv);

    // eps (1 - 6 sin^2) / |u|^6   and   3 eps sin / |u|^6
    TruncSeries one_m6s2(deg);
    ts_mul_into(sin_t, sin_t, one_m6s2);
    for (int j = 0; j <= deg; ++j) one_m6s2[j] *= -6.0;
    one_m6s2[0] += 1.0;
    TruncSeries f1 = ts_mul(one_m6s2, inv3);
    for (int j = 0; j <= deg; ++j) f1[j] *= eps_J2;
    TruncSeries f2 = ts_mul(sin_t, inv3);
    for (int j = 0; j <= deg; ++j) f2[j] *= 3.0 * eps_J2;

    static constexpr int swap_idx[4] = {2, 3, 0, 1}; // (u3, u4, u1, u2)
    for (int i = 0; i < 4; ++i) {
        ts_mul_into(f1, u[static_cast<std::size_t>(i)],
                    out[static_cast<std::size_t>(i)]);
        ts_mul_into(f2, u[static_cast<std::size_t>(swap_idx[i])], tmp);
        ts_axpy(cplx(1.0), tmp, out[static_cast<std::size_t>(i)]);
    }
}

namespace {

// Complex-arithmetic pointwise gradient (rational in u, so it extends to
// complex arguments; real inputs give real outputs).
void grad_R_point_c(const cplx u[4], double eps, cplx out[4]) {
    const cplx s2 = u[0] * u[0] + u[1] * u[1] + u[2] * u[2] + u[3] * u[3];
    if (s2 == cplx(0.0))
        throw SingularSeriesError("grad_R: |u|^2 vanishes");
    if (eps == 0.0) {
        out[0] = out[1] = out[2] = out[3] = 0.0;
        return;
    }
    const cplx inv = 1.0 / s2;
    const cplx sin_t = 2.0 * (u[0] * u[2] + u[1] * u[3]) * inv;
    const cplx inv3 = inv * inv * inv;
    const cplx f1 = eps * (1.0 - 6.0 * sin_t * sin_t) * inv3;
    const cplx f2 = 3.0 * eps * sin_t * inv3;
    out[0] = f1 * u[0] + f2 * u[2];
    out[1] = f1 * u[1] + f2 * u[3];
    out[2] = f1 * u[2] + f2 * u[0];
    out[3] = f1 * u[3] + f2 * u[1];
}

} // namespace

std::array<double, 4> grad_R_point(const std::array<double, 4>& u,
                                   double eps_J2) {
    cplx uc[4] = {u[0], u[1], u[2], u[3]};
    cplx gc[4];
    grad_R_point_c(uc, eps_J2, gc);
    return {gc[0].real(), gc[1].real(), gc[2].real(), gc[3].real()};
}

//--- Kepler: VOP field ---------------------------------------------------------------

SSField::SSField(double eps_J2, double omega) : eps_(eps_J2), omega_(omega) {
    if (!(omega_ > 0.0) || !std::isfinite(omega_))
        throw ConfigError("orbit base frequency must be positive");
}

void SSField::eval_jet(double theta, std::span<const TruncSeries> y,
                       std::span<TruncSeries> out) const {
    require_span(y.size(), 8, "SSField::eval_jet");
    require_span(out.size(), 8, "SSField::eval_jet");
    const int deg = y[0].degree();
    const double cs = std::cos(theta);
    const double sw = std::sin(theta) / omega_;

    if (eps_ == 0.0) {
        for (auto& s : out) zero_series(s);
        return;
    }

    // u = cos(theta) alpha + sin(theta)/omega beta, one scalar pair per node.
    std::vector<TruncSeries> u(4, TruncSeries(deg));
    for (int i = 0; i < 4; ++i) {
        TruncSeries& ui = u[static_cast<std::size_t>(i)];
        const TruncSeries& ai = y[static_cast<std::size_t>(i)];
        const TruncSeries& bi = y[static_cast<std::size_t>(4 + i)];
        for (int j = 0; j <= deg; ++j) ui[j] = cs * ai[j] + sw * bi[j];
    }

    std::vector<TruncSeries> grad(4, TruncSeries(deg));
    grad_R(u, eps_, grad);

    const double sn = std::sin(theta);
    for (int i = 0; i < 4; ++i) {
        const TruncSeries& gi = grad[static_cast<std::size_t>(i)];
        TruncSeries& oa = out[static_cast<std::size_t>(i)];
        TruncSeries& ob = out[static_cast<std::size_t>(4 + i)];
        for (int j = 0; j <= deg; ++j) {
            oa[j] = (sn / omega_) * gi[j];
            ob[j] = -cs * gi[j];
        }
    }
}

void SSField::pointwise(double theta, std::span<const cplx> y,
                        std::span<cplx> out) const {
    require_span(y.size(), 8, "SSField::pointwise");
    require_span(out.size(), 8, "SSField::pointwise");
    const double cs = std::cos(theta);
    const double sn = std::sin(theta);
    cplx u[4], g[4];
    for (int i = 0; i < 4; ++i)
        u[i] = cs * y[static_cast<std::size_t>(i)] +
               (sn / omega_) * y[static_cast<std::size_t>(4 + i)];
    grad_R_point_c(u, eps_, g);
    for (int i = 0; i < 4; ++i) {
        out[static_cast<std::size_t>(i)] = (sn / omega_) * g[i];
        out[static_cast<std::size_t>(4 + i)] = -cs * g[i];
    }
}

void SSField::pointwise_time(double theta, std::span<const cplx> y,
                             std::span<cplx> out) const {
    require_span(y.size(), 9, "SSField::pointwise_time");
    require_span(out.size(), 9, "SSField::pointwise_time");
    pointwise(theta, y.first(8), out.first(8));
    const double cs = std::cos(theta);
    const double sn = std::sin(theta);
    cplx r2 = 0.0;
    for (int i = 0; i < 4; ++i) {
        const cplx ui = cs * y[static_cast<std::size_t>(i)] +
                        (sn / omega_) * y[static_cast<std::size_t>(4 + i)];
        r2 += ui * ui;
    }
    out[8] = r2; // physical time: t' = |u|^2
}

LinearExp SSField::exp_map() const {
    const double w = omega_;
    return [w](double theta, std::span<cplx> v) {
        const double cs = std::cos(theta);
        const double sn = std::sin(theta);
        for (int i = 0; i < 4; ++i) {
            const cplx a = v[static_cast<std::size_t>(i)];
            const cplx b = v[static_cast<std::size_t>(4 + i)];
            v[static_cast<std::size_t>(i)] = cs * a + (sn / w) * b;
            v[static_cast<std::size_t>(4 + i)] = -w * sn * a + cs * b;
        }
    };
}

void ss_state(const TFCoefficients& c, double tau, std::array<double, 4>& u,
              std::array<double, 4>& uprime) {
    if (c.y.dim != 8)
        throw std::invalid_argument(
            "ss_state: coefficients are not a stacked (alpha, beta) set");
    std::vector<cplx> y = tf_eval(c, tau);
    const double theta = c.config.omega * tau;
    const double cs = std::cos(theta);
    const double sn = std::sin(theta);
    for (int i = 0; i < 4; ++i) {
        const cplx a = y[static_cast<std::size_t>(i)];
        const cplx b = y[static_cast<std::size_t>(4 + i)];
        u[static_cast<std::size_t>(i)] = (cs * a + (sn / c.config.omega) * b).real();
        uprime[static_cast<std::size_t>(i)] =
            (-c.config.omega * sn * a + cs * b).real();
    }
}

//--- Kepler: physical time -----------------------------------------------------------

TFCoefficients physical_time_coefficients(const TFCoefficients& c, double t0) {
    if (c.y.dim != 8)
        throw std::invalid_argument(
            "physical_time: coefficients are not a stacked (alpha, beta) set");
    const int M = c.y.M;
    const int slots = c.y.slots;
    const double omega = c.config.omega;

    // The integrand |u(sigma)|^2 is a product of two bandwidth-M trig
    // polynomials of Taylor degree slots-1, so it lives exactly in
    // bandwidth 2M and Taylor degree 2(slots-1).
    const int M2 = 2 * M;
    const int n2 = 2 * M2; // 4M sample angles
    const int pdeg = 2 * (slots - 1);
    const Fft fft(static_cast<std::size_t>(n2));

    // Evaluate every (component, degree) mode line on the fine grid.
    // Node-major staging: jets[(n*8 + comp)*slots + j].
    std::vector<cplx> jets(static_cast<std::size_t>(n2) * 8 *
                           static_cast<std::size_t>(slots));
    {
        std::vector<cplx> padline(static_cast<std::size_t>(2 * M2 + 1),
                                  cplx(0.0));
        std::vector<cplx> nodeline(static_cast<std::size_t>(n2));
        std::vector<cplx> scratch(static_cast<std::size_t>(n2));
        for (int comp = 0; comp < 8; ++comp)
            for (int j = 0; j < slots; ++j) {
                std::fill(padline.begin(), padline.end(), cplx(0.0));
                const cplx* line = c.y.slice(comp, j);
                for (int i = 0; i <= 2 * M; ++i)
                    padline[static_cast<std::size_t>(M + i)] = line[i];
                modes_to_nodes_span(padline.data(), nodeline.data(), M2, fft,
                                    scratch.data());
                for (int n = 0; n < n2; ++n)
                    jets[(static_cast<std::size_t>(n) * 8 +
                          static_cast<std::size_t>(comp)) *
                             static_cast<std::size_t>(slots) +
                         static_cast<std::size_t>(j)] = nodeline[n];
            }
    }

    // Per node: u_i = cos(theta_n) alpha_i + sin(theta_n)/omega beta_i,
    // extended to the product degree, then |u|^2 summed exactly.
    std::vector<cplx> znodes(static_cast<std::size_t>(n2) *
                             static_cast<std::size_t>(pdeg + 1));
    {
        TruncSeries ui(pdeg), sq(pdeg), acc(pdeg);
        for (int n = 0; n < n2; ++n) {
            const double theta = node_angle(n, M2);
            const double cs = std::cos(theta);
            const double sw = std::sin(theta) / omega;
            zero_series(acc);
            for (int i = 0; i < 4; ++i) {
                zero_series(ui);
                const cplx* a = &jets[(static_cast<std::size_t>(n) * 8 +
                                       static_cast<std::size_t>(i)) *
                                      static_cast<std::size_t>(slots)];
                const cplx* b = &jets[(static_cast<std::size_t>(n) * 8 +
                                       static_cast<std::size_t>(4 + i)) *
                                      static_cast<std::size_t>(slots)];
                for (int j = 0; j < slots; ++j) ui[j] = cs * a[j] + sw * b[j];
                ts_mul_into(ui, ui, sq);
                ts_axpy(cplx(1.0), sq, acc);
            }
            for (int j = 0; j <= pdeg; ++j)
                znodes[static_cast<std::size_t>(n) *
                           static_cast<std::size_t>(pdeg + 1) +
                       static_cast<std::size_t>(j)] = acc[j];
        }
    }

    // Back to modes, slot by slot, then integrate in closed form.
    CoeffTensor z(1, pdeg + 1, M2);
    {
        std::vector<cplx> line(static_cast<std::size_t>(n2));
        std::vector<cplx> scratch(static_cast<std::size_t>(n2));
        for (int j = 0; j <= pdeg; ++j) {
            for (int n = 0; n < n2; ++n)
                line[static_cast<std::size_t>(n)] =
                    znodes[static_cast<std::size_t>(n) *
                               static_cast<std::size_t>(pdeg + 1) +
                           static_cast<std::size_t>(j)];
            nodes_to_modes_span(line.data(), z.slice(0, j), M2, fft,
                                scratch.data());
        }
    }

    const TFConfig cfg2{M2, pdeg, omega, 1};
    const std::vector<cplx> t0v{cplx(t0, 0.0)};
    return quadrature_step(z, t0v, cfg2);
}

double physical_time(const TFCoefficients& c, double tau, double t0) {
    const TFCoefficients tc = physical_time_coefficients(c, t0);
    return tf_eval(tc, tau)[0].real();
}

//--- Kepler: diagnostics ---------------------------------------------------------------

double kepler_V(const std::array<double, 3>& q, const KeplerConstants& k) {
    const double r = norm3(q);
    if (!(r > 0.0))
        throw std::invalid_argument("kepler_V: position at the origin");
    const double sin_t = q[2] / r;
    return k.eps_J2() / (2.0 * r * r * r) * (3.0 * sin_t * sin_t - 1.0);
}

double kepler_energy(const std::array<double, 3>& q,
                     const std::array<double, 3>& qdot,
                     const KeplerConstants& k) {
    const double r = norm3(q);
    if (!(r > 0.0))
        throw std::invalid_argument("kepler_energy: position at the origin");
    const double v2 =
        qdot[0] * qdot[0] + qdot[1] * qdot[1] + qdot[2] * qdot[2];
    return 0.5 * v2 - k.mu / r + kepler_V(q, k);
}

//--- named presets ------------------------------------------------------------------------

KeplerState kepler_geostationary(const KeplerConstants& k) {
    return ks_init({42149.1336, 0.0, 0.0},
                   {0.0, 3.075823259987749, 0.0010736649055318406}, 0.0, k);
}

KeplerState kepler_eccentric(const KeplerConstants& k) {
    return ks_init({11959.886901183693, -16289.448826603336,
                    -5963.757695165331},
                   {4.724300951633136, -1.1099935305609756,
                    -0.3847854410416176},
                   0.0, k);
}

} // namespace oscifour
