//============================================================================
// test_tfcore.cpp
//
// Solver-core tests.  Every nontrivial expectation is checked against an
// independent oracle computed inside this file: naive double-sum evaluation
// of a mode/degree tensor, adaptive Simpson quadrature of the integrand,
// hand antiderivatives of single modes, and finite differences in time.
//============================================================================
#include "doctest.h"

#include "oscifour/tfcore.hpp"
#include "test_util.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <vector>

using namespace oscifour;
using testutil::adaptive_simpson;
using testutil::max_abs_diff;
using testutil::random_cplx;

namespace {

const cplx kI(0.0, 1.0);

// Naive oracle: evaluate a mode/degree tensor as
//   sum_k e^{i k omega t} sum_j t^j v_{c,j,k}
// with plain pow() sums — no Horner, no phase ladder.
std::vector<cplx> naive_tensor_eval(const CoeffTensor& v, double omega,
                                    double t) {
    std::vector<cplx> out(static_cast<std::size_t>(v.dim), cplx(0.0));
    for (int c = 0; c < v.dim; ++c)
        for (int k = -v.M; k <= v.M; ++k) {
            const cplx phase = std::exp(kI * (static_cast<double>(k) * omega * t));
            for (int j = 0; j < v.slots; ++j)
                out[static_cast<std::size_t>(c)] +=
                    phase * std::pow(t, j) * v.at(c, j, k);
        }
    return out;
}

// Field plumbing helpers -----------------------------------------------------

void set_series(TruncSeries& s, cplx value) {
    std::fill(s.data(), s.data() + s.degree() + 1, cplx(0.0));
    s[0] = value;
}

struct ZeroField final : OscillatoryField {
    int dim_;
    explicit ZeroField(int d = 1) : dim_(d) {}
    int dim() const override { return dim_; }
    void eval_jet(double, std::span<const TruncSeries>,
                  std::span<TruncSeries> out) const override {
        for (auto& s : out) set_series(s, 0.0);
    }
};

// f(theta, y) = sum_k a_k e^{i k theta}, independent of y.
struct TrigPolyField final : OscillatoryField {
    std::vector<cplx> amp; // amplitudes for k = -K..K
    int K;
    explicit TrigPolyField(std::vector<cplx> a)
        : amp(std::move(a)), K((static_cast<int>(amp.size()) - 1) / 2) {}
    int dim() const override { return 1; }
    cplx value(double theta) const {
        cplx s = 0.0;
        for (int k = -K; k <= K; ++k)
            s += amp[static_cast<std::size_t>(k + K)] *
                 std::exp(kI * (static_cast<double>(k) * theta));
        return s;
    }
    void eval_jet(double theta, std::span<const TruncSeries>,
                  std::span<TruncSeries> out) const override {
        set_series(out[0], value(theta));
    }
};

// Exact solution of y' = sum_k a_k e^{i k omega t}, y(0) = y0.
cplx trig_poly_exact(const TrigPolyField& f, double omega, cplx y0, double t) {
    cplx y = y0;
    for (int k = -f.K; k <= f.K; ++k) {
        const cplx a = f.amp[static_cast<std::size_t>(k + f.K)];
        if (k == 0) {
            y += a * t;
        } else {
            const cplx ikw = kI * (static_cast<double>(k) * omega);
            y += a * (std::exp(ikw * t) - 1.0) / ikw;
        }
    }
    return y;
}

struct ConstantField final : OscillatoryField {
    cplx value;
    explicit ConstantField(cplx v) : value(v) {}
    int dim() const override { return 1; }
    void eval_jet(double, std::span<const TruncSeries>,
                  std::span<TruncSeries> out) const override {
        set_series(out[0], value);
    }
};

// Real scalar problem with genuine y-dependence:
//   f(theta, y) = cos(theta) + 0.3 y^2
struct CosSquareField final : OscillatoryField {
    int dim() const override { return 1; }
    bool real_domain() const override { return true; }
    void eval_jet(double theta, std::span<const TruncSeries> y,
                  std::span<TruncSeries> out) const override {
        TruncSeries sq = y[0] * y[0];
        for (int j = 0; j <= sq.degree(); ++j) out[0][j] = 0.3 * sq[j];
        out[0][0] += std::cos(theta);
    }
};

// Field engineered to overflow on the second pass: the first pass produces
// coefficients of order 1e200, squaring them the next time around exceeds
// the double range.
struct BlowUpField final : OscillatoryField {
    int dim() const override { return 1; }
    void eval_jet(double, std::span<const TruncSeries> y,
                  std::span<TruncSeries> out) const override {
        TruncSeries sq = y[0] * y[0];
        for (int j = 0; j <= sq.degree(); ++j) out[0][j] = sq[j];
        out[0][0] += 1e200;
    }
};

CoeffTensor random_tied_tensor(std::mt19937& g, int D, int slots, int M) {
    CoeffTensor z(D, slots, M);
    for (int c = 0; c < D; ++c)
        for (int j = 0; j < slots; ++j) {
            for (int k = -M; k <= M; ++k) z.at(c, j, k) = random_cplx(g);
            z.at(c, j, -M) = z.at(c, j, M); // the band edges always agree
        }
    return z;
}

} // namespace

TEST_CASE("quadrature reproduces hand antiderivatives of single modes") {
    // One oscillatory mode: integral of e^{2is} from 0 to t is
    // (e^{2it} - 1)/(2i), so the mode coefficient is -0.5i and the mean
    // picks up +0.5i.
    {
        TFConfig cfg{2, 1, 2.0, 1};
        CoeffTensor z(1, 1, 2);
        z.at(0, 0, 1) = 1.0;
        const std::vector<cplx> y0{cplx(0.0)};
        const TFCoefficients c = quadrature_step(z, y0, cfg);
        CHECK(std::abs(c.y.at(0, 0, 1) - cplx(0.0, -0.5)) < 1e-16);
        CHECK(std::abs(c.y.at(0, 0, 0) - cplx(0.0, 0.5)) < 1e-16);
        // Everything else identically zero.
        double rest = 0.0;
        for (int j = 0; j < c.y.slots; ++j)
            for (int k = -2; k <= 2; ++k)
                if (!(j == 0 && (k == 0 || k == 1)))
                    rest = std::max(rest, std::abs(c.y.at(0, j, k)));
        CHECK(rest == 0.0);
    }
    // Pure mean integrand: integral of c ds = c t.
    {
        TFConfig cfg{2, 1, 1.0, 1};
        CoeffTensor z(1, 1, 2);
        const cplx val(0.7, -0.2);
        z.at(0, 0, 0) = val;
        const std::vector<cplx> y0{cplx(1.5, 0.25)};
        const TFCoefficients c = quadrature_step(z, y0, cfg);
        CHECK(c.y.at(0, 1, 0) == val);
        CHECK(c.y.at(0, 0, 0) == y0[0]);
    }
    // Polynomial-times-mode integrand t e^{it}: integrating by parts,
    //   integral_0^t s e^{is} ds = -i t e^{it} + e^{it} - 1,
    // so the degree-1 mode coefficient is -i, the degree-0 mode
    // coefficient is 1, and the mean is -1.
    {
        TFConfig cfg{2, 2, 1.0, 1};
        CoeffTensor z(1, 2, 2);
        z.at(0, 1, 1) = 1.0;
        const std::vector<cplx> y0{cplx(0.0)};
        const TFCoefficients c = quadrature_step(z, y0, cfg);
        CHECK(std::abs(c.y.at(0, 1, 1) - cplx(0.0, -1.0)) < 1e-16);
        CHECK(std::abs(c.y.at(0, 0, 1) - cplx(1.0, 0.0)) < 1e-16);
        CHECK(std::abs(c.y.at(0, 0, 0) - cplx(-1.0, 0.0)) < 1e-16);
    }
}

TEST_CASE("quadrature of a random tensor matches numerical integration") {
    auto g = testutil::rng(11);
    const int D = 2, M = 3, slots = 3;
    const double omega = 1.3;
    TFConfig cfg{M, 4, omega, D};
    const CoeffTensor z = random_tied_tensor(g, D, slots, M);
    const std::vector<cplx> y0 = testutil::random_cvec(g, D);
    const TFCoefficients c = quadrature_step(z, y0, cfg);

    for (double t : {0.7, 2.1, 5.5}) {
        const std::vector<cplx> got = tf_eval(c, t);
        for (int comp = 0; comp < D; ++comp) {
            const cplx want =
                y0[static_cast<std::size_t>(comp)] +
                adaptive_simpson(
                    [&](double s) {
                        return naive_tensor_eval(z, omega, s)
                            [static_cast<std::size_t>(comp)];
                    },
                    0.0, t, 1e-13);
            CHECK(std::abs(got[static_cast<std::size_t>(comp)] - want) < 1e-9);
        }
    }
}

TEST_CASE("integration step is an exact antiderivative (time derivative check)") {
    auto g = testutil::rng(21);
    const int D = 2, M = 3, slots = 3;
    const double omega = 2.3;
    TFConfig cfg{M, 4, omega, D};
    const CoeffTensor z = random_tied_tensor(g, D, slots, M);
    const std::vector<cplx> y0 = testutil::random_cvec(g, D);
    const TFCoefficients c = quadrature_step(z, y0, cfg);

    std::uniform_real_distribution<double> ut(0.0, 2.0);
    const double h = 1e-6;
    for (int trial = 0; trial < 20; ++trial) {
        const double t = ut(g);
        const std::vector<cplx> hi = tf_eval(c, t + h);
        const std::vector<cplx> lo = tf_eval(c, t - h);
        const std::vector<cplx> want = naive_tensor_eval(z, omega, t);
        for (int comp = 0; comp < D; ++comp) {
            const cplx fd =
                (hi[static_cast<std::size_t>(comp)] -
                 lo[static_cast<std::size_t>(comp)]) / (2.0 * h);
            const double scale = std::abs(want[static_cast<std::size_t>(comp)]) + 1.0;
            CHECK(std::abs(fd - want[static_cast<std::size_t>(comp)]) / scale <
                  1e-6);
        }
    }
}

TEST_CASE("a pass on the zero field is a fixed point at the initial value") {
    const TFConfig cfg{4, 3, 1.7, 2};
    const std::vector<cplx> y0{cplx(0.3, -0.4), cplx(1.1, 0.0)};
    const ZeroField field(2);
    TFCoefficients c = tf_initial(y0, cfg);
    for (int pass = 1; pass <= cfg.d; ++pass) {
        c = tf_pass(field, c, cfg);
        for (int comp = 0; comp < 2; ++comp)
            for (int j = 0; j < c.y.slots; ++j)
                for (int k = -4; k <= 4; ++k) {
                    const cplx want = (j == 0 && k == 0)
                                          ? y0[static_cast<std::size_t>(comp)]
                                          : cplx(0.0);
                    CHECK(c.y.at(comp, j, k) == want);
                }
    }
    const std::vector<cplx> at = tf_eval(c, 0.83);
    CHECK(max_abs_diff(at, y0) == 0.0);
}

TEST_CASE("single-harmonic forcing is integrated exactly in one pass") {
    // y' = e^{i omega t}, y(0) = 0, omega = 1: the solution -i(e^{it} - 1)
    // has mode coefficient -i and mean +i.  Needs M >= 2 so that the k = 1
    // harmonic is sampled alias-free on the 2M-point grid.
    for (int M : {2, 4}) {
        TFConfig cfg{M, 1, 1.0, 1};
        const TrigPolyField field({0.0, 0.0, 1.0}); // amplitudes for k=-1,0,1
        const std::vector<cplx> y0{cplx(0.0)};
        const TFCoefficients c = tf_pass(field, tf_initial(y0, cfg), cfg);
        CHECK(std::abs(c.y.at(0, 0, 1) - cplx(0.0, -1.0)) < 1e-15);
        CHECK(std::abs(c.y.at(0, 0, 0) - cplx(0.0, 1.0)) < 1e-15);
        double rest = 0.0;
        for (int j = 0; j < c.y.slots; ++j)
            for (int k = -M; k <= M; ++k)
                if (!(j == 0 && (k == 0 || k == 1)))
                    rest = std::max(rest, std::abs(c.y.at(0, j, k)));
        CHECK(rest < 1e-15);
    }
}

TEST_CASE("M=1 cannot separate e^{i theta} from its two-point samples") {
    // On the two nodes theta in {0, pi} the forcing e^{i theta} takes the
    // values 1 and -1 — indistinguishable from cos(theta) — so the computed
    // solution is the integral of cos(omega s): sin(omega t)/omega.
    const double omega = 1.0;
    TFConfig cfg{1, 3, omega, 1};
    const TrigPolyField field({0.0, 0.0, 1.0});
    const std::vector<cplx> y0{cplx(0.0)};
    const TFCoefficients c = tf_solve(field, y0, cfg);
    auto g = testutil::rng(31);
    std::uniform_real_distribution<double> ut(0.0, 2.0 * M_PI);
    for (int trial = 0; trial < 20; ++trial) {
        const double t = ut(g);
        const cplx got = tf_eval(c, t)[0];
        CHECK(std::abs(got - std::sin(omega * t) / omega) < 1e-13);
    }
}

TEST_CASE("constant forcing produces pure drift") {
    const cplx rate(1.0, 0.0);
    TFConfig cfg{3, 4, 2.0, 1};
    const ConstantField field(rate);
    const std::vector<cplx> y0{cplx(0.25, -1.0)};
    const TFCoefficients one = tf_pass(field, tf_initial(y0, cfg), cfg);
    CHECK(std::abs(one.y.at(0, 1, 0) - rate) < 1e-15);
    CHECK(std::abs(one.y.at(0, 0, 0) - y0[0]) < 1e-15);
    const TFCoefficients full = tf_solve(field, y0, cfg);
    auto g = testutil::rng(41);
    std::uniform_real_distribution<double> ut(-1.0, 3.0);
    for (int trial = 0; trial < 10; ++trial) {
        const double t = ut(g);
        CHECK(std::abs(tf_eval(full, t)[0] - (y0[0] + rate * t)) < 1e-14);
    }
}

TEST_CASE("band-limited forcing independent of y is solved exactly") {
    auto g = testutil::rng(51);
    const int M = 3;
    const double omega = 1.7;
    // Modes k = -2..2 stay below the band edge of the 2M-point grid.
    std::vector<cplx> amp(5);
    for (auto& a : amp) a = random_cplx(g);
    const TrigPolyField field(amp);
    const std::vector<cplx> y0{random_cplx(g)};
    TFConfig cfg{M, 3, omega, 1};
    const TFCoefficients c = tf_solve(field, y0, cfg);
    std::uniform_real_distribution<double> ut(0.0, 2.0 * M_PI);
    for (int trial = 0; trial < 100; ++trial) {
        const double t = ut(g);
        const cplx want = trig_poly_exact(field, omega, y0[0], t);
        CHECK(std::abs(tf_eval(c, t)[0] - want) < 1e-12);
    }
}

TEST_CASE("initial value, conjugate symmetry, and top-degree sparsity hold after every pass") {
    const TFConfig cfg{4, 5, 3.1, 1};
    const CosSquareField field;
    const std::vector<cplx> y0{cplx(0.7, 0.0)};
    TFCoefficients c = tf_initial(y0, cfg);
    for (int pass = 1; pass <= cfg.d; ++pass) {
        c = tf_pass(field, c, cfg);
        // Value at t = 0 is pinned to y0.
        CHECK(std::abs(tf_eval(c, 0.0)[0] - y0[0]) < 1e-13);
        // Real problem: opposite modes are complex conjugates.
        double asym = 0.0;
        for (int j = 0; j < c.y.slots; ++j)
            for (int k = 1; k <= 4; ++k)
                asym = std::max(asym, std::abs(c.y.at(0, j, -k) -
                                               std::conj(c.y.at(0, j, k))));
        CHECK(asym < 1e-13);
        // Only the mean mode carries the top Taylor degree.
        for (int k = -4; k <= 4; ++k)
            if (k != 0) CHECK(c.y.at(0, c.y.slots - 1, k) == cplx(0.0));
    }
}

TEST_CASE("degree refinement does not lose accuracy on the closed-form model") {
    // The forcing a e^{i k0 omega t} is y-independent and band-limited, so
    // every degree reproduces the closed form; the errors must sit at
    // rounding level and never grow from one degree to the next beyond a
    // factor-2 jitter allowance.
    const double omega = 2.0;
    const int M = 3;
    const TrigPolyField field({0.0, 0.0, 0.0, 0.0, cplx(0.4, -0.2)}); // k0 = 2
    const std::vector<cplx> y0{cplx(0.3, 0.0)};
    const double t_star = 0.1 * (2.0 * M_PI / omega);
    std::vector<double> err;
    for (int d = 1; d <= 6; ++d) {
        TFConfig cfg{M, d, omega, 1};
        const TFCoefficients c = tf_solve(field, y0, cfg);
        const cplx want = trig_poly_exact(field, omega, y0[0], t_star);
        err.push_back(std::abs(tf_eval(c, t_star)[0] - want));
        CHECK(err.back() < 1e-12);
    }
    for (std::size_t i = 0; i + 1 < err.size(); ++i)
        CHECK(err[i + 1] <= 2.0 * err[i] + 1e-14);
}

TEST_CASE("evaluation matches the naive double-sum oracle") {
    auto g = testutil::rng(61);
    const int D = 3, M = 5, d = 4;
    TFCoefficients c;
    c.config = TFConfig{M, d, 1.9, D};
    c.degree = d;
    c.y = CoeffTensor(D, d + 2, M);
    for (auto& x : c.y.v) x = random_cplx(g);
    c.y0 = testutil::random_cvec(g, D);

    std::uniform_real_distribution<double> ut(-2.0, 2.0);
    for (int trial = 0; trial < 25; ++trial) {
        const double t = ut(g);
        const std::vector<cplx> got = tf_eval(c, t);
        const std::vector<cplx> want = naive_tensor_eval(c.y, c.config.omega, t);
        double scale = 0.0;
        for (const auto& w : want) scale = std::max(scale, std::abs(w));
        CHECK(max_abs_diff(got, want) < 1e-13 * (1.0 + scale));
    }

    // Spot values: a constant tensor evaluates to the constant; a single
    // k=1 mode with omega=1 at t=pi evaluates to e^{i pi} = -1.
    TFCoefficients flat;
    flat.config = TFConfig{2, 1, 1.0, 1};
    flat.degree = 1;
    flat.y = CoeffTensor(1, 3, 2);
    flat.y0 = {cplx(0.9, -0.1)};
    flat.y.at(0, 0, 0) = flat.y0[0];
    for (double t : {-3.0, 0.0, 0.5, 7.7})
        CHECK(tf_eval(flat, t)[0] == flat.y0[0]);

    TFCoefficients mode;
    mode.config = TFConfig{2, 1, 1.0, 1};
    mode.degree = 1;
    mode.y = CoeffTensor(1, 3, 2);
    mode.y0 = {cplx(0.0)};
    mode.y.at(0, 0, 1) = 1.0;
    CHECK(std::abs(tf_eval(mode, M_PI)[0] - cplx(-1.0, 0.0)) < 1e-15);
}

TEST_CASE("evaluation through a linear flow map") {
    // Identity map: bit-identical to plain evaluation.
    auto g = testutil::rng(71);
    TFCoefficients c;
    c.config = TFConfig{3, 2, 1.4, 2};
    c.degree = 2;
    c.y = CoeffTensor(2, 4, 3);
    for (auto& x : c.y.v) x = random_cplx(g);
    c.y0 = testutil::random_cvec(g, 2);
    const LinearExp ident = [](double, std::span<cplx>) {};
    for (double t : {0.0, 0.9, 4.2})
        CHECK(max_abs_diff(tf_eval_x(ident, c, t), tf_eval(c, t)) == 0.0);

    // Zero field under a rotation flow: the full state is the rotated
    // initial vector, e^{t omega A} y0 with A the planar rotation generator.
    const TFConfig cfg{2, 2, 2.6, 2};
    const std::vector<cplx> y0{cplx(0.8, 0.1), cplx(-0.3, 0.4)};
    const ZeroField field(2);
    const TFCoefficients sol = tf_solve(field, y0, cfg);
    const LinearExp rot = [](double theta, std::span<cplx> v) {
        const double cs = std::cos(theta), sn = std::sin(theta);
        const cplx a = v[0], b = v[1];
        v[0] = cs * a + sn * b;
        v[1] = -sn * a + cs * b;
    };
    std::uniform_real_distribution<double> ut(0.0, 5.0);
    for (int trial = 0; trial < 10; ++trial) {
        const double t = ut(g);
        const std::vector<cplx> got = tf_eval_x(rot, sol, t);
        const double th = cfg.omega * t;
        const std::vector<cplx> want{
            std::cos(th) * y0[0] + std::sin(th) * y0[1],
            -std::sin(th) * y0[0] + std::cos(th) * y0[1]};
        CHECK(max_abs_diff(got, want) < 1e-15);
    }
}

TEST_CASE("coefficient files roundtrip losslessly and reject damage") {
    auto g = testutil::rng(81);
    TFCoefficients c;
    c.config = TFConfig{3, 2, 1.234567890123456, 2};
    c.degree = 2;
    c.y = CoeffTensor(2, 4, 3);
    for (auto& x : c.y.v) x = random_cplx(g);
    c.y0 = testutil::random_cvec(g, 2);

    const std::string path =
        (std::filesystem::temp_directory_path() / "oscifour_tfcore_io.bin")
            .string();
    tf_save(c, path, "unit-test-problem");

    const LoadedCoefficients back = tf_load(path);
    CHECK(back.problem_id == "unit-test-problem");
    CHECK(back.coeffs.config.M == 3);
    CHECK(back.coeffs.config.d == 2);
    CHECK(back.coeffs.config.dim == 2);
    CHECK(back.coeffs.config.omega == c.config.omega);
    CHECK(back.coeffs.degree == 2);
    REQUIRE(back.coeffs.y.v.size() == c.y.v.size());
    CHECK(std::equal(c.y.v.begin(), c.y.v.end(), back.coeffs.y.v.begin()));
    CHECK(std::equal(c.y0.begin(), c.y0.end(), back.coeffs.y0.begin()));

    // The human-readable sidecar carries the shape.
    std::ifstream meta(path + ".meta");
    REQUIRE(meta.good());
    std::string meta_text((std::istreambuf_iterator<char>(meta)),
                          std::istreambuf_iterator<char>());
    CHECK(meta_text.find("M = 3") != std::string::npos);
    CHECK(meta_text.find("problem = unit-test-problem") != std::string::npos);

    // Truncation is a parse error with a byte offset, not a crash.
    std::string raw;
    {
        std::ifstream in(path, std::ios::binary);
        raw.assign((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
    }
    const std::string cut_path = path + ".cut";
    {
        std::ofstream out(cut_path, std::ios::binary | std::ios::trunc);
        out.write(raw.data(), static_cast<std::streamsize>(raw.size() / 2));
    }
    CHECK_THROWS_AS((void)tf_load(cut_path), IoError);
    try {
        (void)tf_load(cut_path);
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("parse error") != std::string::npos);
        CHECK(e.offset >= 0);
    }

    // A header that disagrees with the payload size is a schema error.
    const std::string bad_path = path + ".badM";
    {
        std::string patched = raw;
        patched[12] = 4; // bump the stored M without touching the payload
        std::ofstream out(bad_path, std::ios::binary | std::ios::trunc);
        out.write(patched.data(), static_cast<std::streamsize>(patched.size()));
    }
    CHECK_THROWS_AS((void)tf_load(bad_path), IoError);
    try {
        (void)tf_load(bad_path);
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("schema error") != std::string::npos);
    }

    // A clobbered magic number is rejected immediately.
    const std::string not_path = path + ".not";
    {
        std::string patched = raw;
        patched[0] = 'X';
        std::ofstream out(not_path, std::ios::binary | std::ios::trunc);
        out.write(patched.data(), static_cast<std::streamsize>(patched.size()));
    }
    CHECK_THROWS_AS((void)tf_load(not_path), IoError);

    for (const auto& p : {path, path + ".meta", cut_path, bad_path, not_path})
        std::filesystem::remove(p);
}

TEST_CASE("overflow during refinement reports the failing pass") {
    const TFConfig cfg{2, 4, 1.0, 1};
    const BlowUpField field;
    const std::vector<cplx> y0{cplx(0.0)};
    CHECK_THROWS_AS((void)tf_solve(field, y0, cfg), DivergenceError);
    try {
        (void)tf_solve(field, y0, cfg);
    } catch (const DivergenceError& e) {
        CHECK(e.pass_index == 2);
        CHECK(std::string(e.what()).find("pass") != std::string::npos);
    }
}

TEST_CASE("configuration and shape errors are rejected up front") {
    const std::vector<cplx> y0{cplx(1.0)};
    CHECK_THROWS_AS((TFConfig{0, 1, 1.0, 1}.validate()), ConfigError);
    CHECK_THROWS_AS((TFConfig{1, 0, 1.0, 1}.validate()), ConfigError);
    CHECK_THROWS_AS((TFConfig{1, 1, 0.0, 1}.validate()), ConfigError);
    CHECK_THROWS_AS((TFConfig{1, 1, -2.0, 1}.validate()), ConfigError);
    CHECK_THROWS_AS((TFConfig{1, 1, 1.0, 0}.validate()), ConfigError);

    // Initial-condition length must match the configured dimension.
    CHECK_THROWS_AS(
        (void)tf_initial(std::vector<cplx>(3), (TFConfig{2, 1, 1.0, 2})),
        ConfigError);

    // Field dimension must match the configuration.
    const ZeroField wide(3);
    CHECK_THROWS_AS((void)tf_solve(wide, y0, (TFConfig{2, 1, 1.0, 1})),
                    ConfigError);

    // A pass beyond the configured degree is refused.
    const TFConfig cfg{2, 1, 1.0, 1};
    const ZeroField field(1);
    const TFCoefficients done = tf_solve(field, y0, cfg);
    CHECK_THROWS_AS((void)tf_pass(field, done, cfg), ConfigError);

    // Integrand tensors wider than the configuration are refused.
    CoeffTensor z(1, 4, 2); // holds degrees 0..3, but d = 1 allows 0..1
    CHECK_THROWS_AS((void)quadrature_step(z, y0, (TFConfig{2, 1, 1.0, 1})),
                    ConfigError);
    CoeffTensor zm(1, 1, 3); // M mismatch
    CHECK_THROWS_AS((void)quadrature_step(zm, y0, (TFConfig{2, 1, 1.0, 1})),
                    ConfigError);
}

TEST_CASE("optional polishing passes keep exact solutions exact") {
    // On a problem the scheme solves exactly, re-running the final pass must
    // reproduce the same coefficients (the solve is a fixed point).
    auto g = testutil::rng(91);
    const int M = 3;
    const double omega = 1.7;
    std::vector<cplx> amp(5);
    for (auto& a : amp) a = random_cplx(g);
    const TrigPolyField field(amp);
    const std::vector<cplx> y0{random_cplx(g)};
    const TFConfig cfg{M, 3, omega, 1};
    const TFCoefficients plain = tf_solve(field, y0, cfg);
    SolveOptions opts;
    opts.extra_passes = 2;
    const TFCoefficients polished = tf_solve(field, y0, cfg, opts);
    REQUIRE(polished.y.v.size() == plain.y.v.size());
    double diff = 0.0;
    for (std::size_t i = 0; i < plain.y.v.size(); ++i)
        diff = std::max(diff, std::abs(plain.y.v[i] - polished.y.v[i]));
    CHECK(diff < 1e-14);
}

TEST_CASE("passes run identically with internal threading") {
    const TFConfig cfg{4, 4, 3.1, 1};
    const CosSquareField field;
    const std::vector<cplx> y0{cplx(0.7, 0.0)};
    const TFCoefficients serial = tf_solve(field, y0, cfg);
    SolveOptions opts;
    opts.threads = 3;
    const TFCoefficients threaded = tf_solve(field, y0, cfg, opts);
    REQUIRE(serial.y.v.size() == threaded.y.v.size());
    CHECK(std::equal(serial.y.v.begin(), serial.y.v.end(),
                     threaded.y.v.begin()));
}
