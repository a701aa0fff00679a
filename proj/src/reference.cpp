//============================================================================
// reference.cpp
//
// Dormand-Prince 5(4) with PI step-size control, plus the error metrics.
//============================================================================
#include "oscifour/reference.hpp"

#include "oscifour/problems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

namespace oscifour {

namespace {

//--- Dormand-Prince 5(4) tableau ---------------------------------------------

constexpr double kC[7] = {0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0,
                          1.0, 1.0};

constexpr double kA2[] = {1.0 / 5.0};
constexpr double kA3[] = {3.0 / 40.0, 9.0 / 40.0};
constexpr double kA4[] = {44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0};
constexpr double kA5[] = {19372.0 / 6561.0, -25360.0 / 2187.0,
                          64448.0 / 6561.0, -212.0 / 729.0};
constexpr double kA6[] = {9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0,
                          49.0 / 176.0, -5103.0 / 18656.0};
// Fifth-order weights; the seventh stage sits at y_new, so the first stage of
// the next step reuses it (FSAL).
constexpr double kB[] = {35.0 / 384.0,     0.0,           500.0 / 1113.0,
                         125.0 / 192.0,    -2187.0 / 6784.0, 11.0 / 84.0};
// b - bhat: weights of the embedded error estimate.
constexpr double kE[] = {71.0 / 57600.0,  0.0,
                         -71.0 / 16695.0, 71.0 / 1920.0,
                         -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0};

// Controller constants.
constexpr double kSafety = 0.9;
constexpr double kFacMin = 0.2;
constexpr double kFacMax = 5.0;
constexpr double kBeta = 0.04;           // PI damping
constexpr double kExpo = 0.2 - 0.75 * kBeta;
constexpr long long kMaxEvals = 400000000LL; // hard runaway guard

bool finite_vec(std::span<const cplx> v) {
    for (const cplx& z : v)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

std::string at_time(double t) {
    std::ostringstream os;
    os << "t = " << t;
    return os.str();
}

// Scaled RMS norm used for both the error estimate and the initial step.
double scaled_rms(std::span<const cplx> v, std::span<const double> sc) {
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double q = std::abs(v[i]) / sc[i];
        acc += q * q;
    }
    return std::sqrt(acc / static_cast<double>(v.size()));
}

} // namespace

ReferenceSolution rk_solve(const PointwiseField& f, std::span<const cplx> y0,
                           double omega, double t_end, double tol,
                           std::span<const double> sample_times) {
    if (y0.empty()) throw ConfigError("reference solve: empty initial state");
    if (!(tol >= 1e-14 && tol <= 1e-2))
        throw ConfigError("reference solve: tol must lie in [1e-14, 1e-2]");
    if (!std::isfinite(t_end) || t_end < 0.0)
        throw ConfigError(
            "reference solve: t_end must be finite and nonnegative");
    if (!std::isfinite(omega))
        throw ConfigError("reference solve: omega must be finite");
    if (!finite_vec(y0))
        throw DivergenceError("reference solve: initial state is not finite");

    std::vector<double> targets(sample_times.begin(), sample_times.end());
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
    if (targets.empty()) targets.push_back(t_end);
    if (targets.front() < 0.0 || targets.back() > t_end)
        throw ConfigError(
            "reference solve: sample times must lie within [0, t_end]");

    const std::size_t n = y0.size();
    ReferenceSolution sol;
    sol.tol = tol;
    sol.times.reserve(targets.size());
    sol.states.reserve(targets.size());

    std::vector<cplx> y(y0.begin(), y0.end());
    double t = 0.0;
    std::size_t next = 0;
    if (!targets.empty() && targets[0] == 0.0) {
        sol.times.push_back(0.0);
        sol.states.push_back(y);
        ++next;
    }
    if (next == targets.size()) return sol;

    std::vector<std::vector<cplx>> k(7, std::vector<cplx>(n));
    std::vector<cplx> stage(n), ynew(n), errv(n);
    std::vector<double> sc(n);

    const auto eval = [&](double tt, std::span<const cplx> yy,
                          std::vector<cplx>& out) {
        f(omega * tt, yy, out);
        ++sol.stats.evals;
    };

    // Hairer-style starting step size.
    eval(0.0, y, k[0]); // doubles as the first FSAL stage
    if (!finite_vec(k[0]))
        throw DivergenceError(
            "reference solve: right-hand side is not finite at the start");
    double h;
    {
        for (std::size_t i = 0; i < n; ++i)
            sc[i] = tol + tol * std::abs(y[i]);
        const double d0 = scaled_rms(y, sc);
        const double d1 = scaled_rms(k[0], sc);
        double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * (d0 / d1);
        h0 = std::min(h0, targets.back());
        for (std::size_t i = 0; i < n; ++i) stage[i] = y[i] + h0 * k[0][i];
        eval(h0, stage, k[1]);
        double d2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) errv[i] = k[1][i] - k[0][i];
        d2 = scaled_rms(errv, sc) / h0;
        double h1;
        if (std::max(d1, d2) <= 1e-15)
            h1 = std::max(1e-6, h0 * 1e-3);
        else
            h1 = std::pow(0.01 / std::max(d1, d2), 0.2);
        h = std::min({100.0 * h0, h1, targets.back()});
        if (!(h > 0.0) || !std::isfinite(h))
            throw OracleError("reference solve: could not pick a starting "
                              "step size at " + at_time(0.0));
    }

    double errold = 1e-4;
    bool just_rejected = false;

    while (next < targets.size()) {
        const double target = targets[next];
        bool clipped = false;
        if (t + h >= target) {
            h = target - t;
            clipped = true;
        }
        if (!(h > 0.0) || t + h == t)
            throw OracleError(
                "reference solve: step size underflow at " + at_time(t) +
                " (tolerance unreachable; the problem may be too stiff)");
        if (sol.stats.evals > kMaxEvals)
            throw OracleError("reference solve: evaluation budget exhausted "
                              "at " + at_time(t));

        // Stages 2..7 (k[0] comes from FSAL or the fresh start).
        const auto combine = [&](const double* a, int m, double c) {
            for (std::size_t i = 0; i < n; ++i) {
                cplx acc = 0.0;
                for (int s = 0; s < m; ++s)
                    acc += a[s] * k[static_cast<std::size_t>(s)][i];
                stage[i] = y[i] + h * acc;
            }
            eval(t + c * h, stage, k[static_cast<std::size_t>(m)]);
        };
        combine(kA2, 1, kC[1]);
        combine(kA3, 2, kC[2]);
        combine(kA4, 3, kC[3]);
        combine(kA5, 4, kC[4]);
        combine(kA6, 5, kC[5]);
        for (std::size_t i = 0; i < n; ++i) {
            cplx acc = 0.0;
            for (int s = 0; s < 6; ++s)
                acc += kB[s] * k[static_cast<std::size_t>(s)][i];
            ynew[i] = y[i] + h * acc;
        }
        eval(t + h, ynew, k[6]); // stage 7 at the new point (FSAL candidate)

        for (std::size_t i = 0; i < n; ++i) {
            cplx acc = 0.0;
            for (int s = 0; s < 7; ++s)
                acc += kE[s] * k[static_cast<std::size_t>(s)][i];
            errv[i] = h * acc;
            sc[i] = tol + tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
        }
        const double err = scaled_rms(errv, sc);

        if (!std::isfinite(err) || !finite_vec(ynew)) {
            // A wildly wrong trial step: shrink hard and retry; if the step
            // is already at the floor the state has genuinely diverged.
            ++sol.stats.rejected;
            const double hshr = h * kFacMin;
            if (!(hshr > 0.0) || t + hshr == t)
                throw DivergenceError(
                    "reference solve: state left the finite range at " +
                    at_time(t));
            h = hshr;
            just_rejected = true;
            continue;
        }

        if (err <= 1.0) {
            // Accept.
            ++sol.stats.accepted;
            t = clipped ? target : t + h;
            std::swap(y, ynew);
            std::swap(k[0], k[6]); // FSAL
            if (clipped) {
                sol.times.push_back(t);
                sol.states.push_back(y);
                ++next;
            }
            const double safe_err = std::max(err, 1e-30);
            double fac = kSafety * std::pow(safe_err, -kExpo) *
                         std::pow(errold, kBeta);
            fac = std::clamp(fac, kFacMin, kFacMax);
            if (just_rejected) fac = std::min(fac, 1.0);
            h *= fac;
            errold = std::max(err, 1e-4);
            just_rejected = false;
        } else {
            // Reject: shrink without growth.
            ++sol.stats.rejected;
            const double fac =
                std::clamp(kSafety * std::pow(err, -0.2), kFacMin, 1.0);
            h *= fac;
            just_rejected = true;
        }
    }
    return sol;
}

//--- error metrics -----------------------------------------------------------------

namespace {

void check_ref(const ReferenceSolution& ref) {
    if (ref.times.size() != ref.states.size())
        throw std::invalid_argument(
            "error_curve: reference times/states length mismatch");
    if (ref.times.empty())
        throw std::invalid_argument("error_curve: empty reference");
    for (std::size_t i = 1; i < ref.times.size(); ++i)
        if (!(ref.times[i] > ref.times[i - 1]))
            throw std::invalid_argument(
                "error_curve: reference times must be strictly increasing");
}

// Rotate a stacked (alpha, beta) state to (u, u') at angle theta.
void rotate_to_u(std::span<const cplx> y, double theta, double omega,
                 std::array<double, 4>& u, std::array<double, 4>& up) {
    const double cs = std::cos(theta), sn = std::sin(theta);
    for (int i = 0; i < 4; ++i) {
        const cplx a = y[static_cast<std::size_t>(i)];
        const cplx b = y[static_cast<std::size_t>(4 + i)];
        u[static_cast<std::size_t>(i)] = (cs * a + (sn / omega) * b).real();
        up[static_cast<std::size_t>(i)] = (-omega * sn * a + cs * b).real();
    }
}

} // namespace

std::vector<ErrorPoint> error_curve(const TFCoefficients& c,
                                    const ReferenceSolution& ref,
                                    ErrorMetric metric) {
    check_ref(ref);
    const std::size_t dim = static_cast<std::size_t>(c.y.dim);
    const std::size_t rdim = ref.states.front().size();

    std::vector<ErrorPoint> out;
    out.reserve(ref.times.size());

    switch (metric) {
    case ErrorMetric::component_max: {
        if (rdim != dim && rdim != dim + 1)
            throw std::invalid_argument(
                "error_curve: reference dimension does not match the "
                "approximant");
        for (std::size_t s = 0; s < ref.times.size(); ++s) {
            const double t = ref.times[s];
            const std::vector<cplx> v = tf_eval(c, t);
            double worst = 0.0;
            for (std::size_t i = 0; i < dim; ++i)
                worst = std::max(worst, std::abs(v[i] - ref.states[s][i]));
            out.push_back({t, worst});
        }
        break;
    }
    case ErrorMetric::position_relative: {
        if (dim != 8 || (rdim != 8 && rdim != 9))
            throw std::invalid_argument(
                "error_curve: position metric needs stacked (alpha, beta) "
                "states of dimension 8");
        for (std::size_t s = 0; s < ref.times.size(); ++s) {
            const double t = ref.times[s];
            const double theta = c.config.omega * t;
            std::array<double, 4> ua{}, upa{}, ur{}, upr{};
            const std::vector<cplx> v = tf_eval(c, t);
            rotate_to_u(v, theta, c.config.omega, ua, upa);
            rotate_to_u(std::span<const cplx>(ref.states[s]).first(8), theta,
                        c.config.omega, ur, upr);
            const std::array<double, 3> qa = ks_position(ua);
            const std::array<double, 3> qr = ks_position(ur);
            double num = 0.0, den = 0.0;
            for (int i = 0; i < 3; ++i) {
                const double d = qa[static_cast<std::size_t>(i)] -
                                 qr[static_cast<std::size_t>(i)];
                num += d * d;
                den += qr[static_cast<std::size_t>(i)] *
                       qr[static_cast<std::size_t>(i)];
            }
            if (!(den > 0.0))
                throw std::invalid_argument(
                    "error_curve: reference position vanishes");
            out.push_back({t, std::sqrt(num / den)});
        }
        break;
    }
    case ErrorMetric::physical_time: {
        if (dim != 8 || rdim != 9)
            throw std::invalid_argument(
                "error_curve: time metric needs a 9-component reference "
                "(physical time last) against dimension-8 coefficients");
        const TFCoefficients clock = physical_time_coefficients(c, 0.0);
        for (std::size_t s = 0; s < ref.times.size(); ++s) {
            const double t = ref.times[s];
            const double t_tf = tf_eval(clock, t)[0].real();
            const double t_ref = ref.states[s][8].real();
            out.push_back({t, std::abs(t_tf - t_ref)});
        }
        break;
    }
    }
    return out;
}

} // namespace oscifour
