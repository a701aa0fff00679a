//============================================================================
// test_fourier.cpp — DFT conventions, mode packing, and trig evaluation
// against direct-summation oracles.
//============================================================================
#include "doctest.h"
#include "test_util.hpp"

#include "oscifour/fourier.hpp"

using namespace oscifour;
using testutil::max_abs_diff;
using testutil::norm2;
using testutil::random_cvec;

namespace {

// Direct O(N^2) forward sum S_k = sum_n e^{-i k n pi / M} v_n.
std::vector<cplx> dft_forward_oracle(const std::vector<cplx>& v) {
    const int N = static_cast<int>(v.size());
    const int M = N / 2;
    std::vector<cplx> out(v.size());
    for (int k = 0; k < N; ++k) {
        cplx acc = 0.0;
        for (int n = 0; n < N; ++n) {
            const double arg = -double(k) * double(n) * M_PI / double(M);
            acc += cplx(std::cos(arg), std::sin(arg)) * v[n];
        }
        out[k] = acc;
    }
    return out;
}

// Direct normalized inverse sum.
std::vector<cplx> dft_inverse_oracle(const std::vector<cplx>& s) {
    const int N = static_cast<int>(s.size());
    const int M = N / 2;
    std::vector<cplx> out(s.size());
    for (int n = 0; n < N; ++n) {
        cplx acc = 0.0;
        for (int k = 0; k < N; ++k) {
            const double arg = double(k) * double(n) * M_PI / double(M);
            acc += cplx(std::cos(arg), std::sin(arg)) * s[k];
        }
        out[n] = acc / double(N);
    }
    return out;
}

// Direct trig sum at the nodes.
std::vector<cplx> trig_nodes_oracle(const ModeVector& m) {
    std::vector<cplx> out(static_cast<std::size_t>(2 * m.M));
    for (int n = 0; n < 2 * m.M; ++n) {
        cplx acc = 0.0;
        for (int k = -m.M; k <= m.M; ++k) {
            const double arg = double(k) * node_angle(n, m.M);
            acc += cplx(std::cos(arg), std::sin(arg)) * m.at(k);
        }
        out[static_cast<std::size_t>(n)] = acc;
    }
    return out;
}

// Trig evaluation by a single complex Horner recurrence in E = e^{i theta}:
// sum_{k=-M}^{M} m_k E^k = E^{-M} * (((m_M E + m_{M-1}) E + ...) E + m_{-M}).
cplx eval_trig_oracle(const ModeVector& m, double theta) {
    const cplx E(std::cos(theta), std::sin(theta));
    cplx acc = m.at(m.M);
    for (int k = m.M - 1; k >= -m.M; --k) acc = acc * E + m.at(k);
    const double arg = -double(m.M) * theta;
    return acc * cplx(std::cos(arg), std::sin(arg));
}

ModeVector random_tied_modes(std::mt19937& g, int M) {
    ModeVector m;
    m.M = M;
    m.modes = random_cvec(g, static_cast<std::size_t>(2 * M + 1));
    m.at(-M) = m.at(M); // uniqueness tie
    return m;
}

} // namespace

TEST_CASE("forward transform: constant and pure-mode signals, direct-sum oracle") {
    NodeVector ones{{cplx(1), cplx(1), cplx(1), cplx(1)}};
    const auto s1 = dft_forward(ones);
    CHECK(std::abs(s1[0] - cplx(4.0)) < 1e-14);
    for (int k = 1; k < 4; ++k) CHECK(std::abs(s1[k]) < 1e-14);

    // v_n = e^{i theta_n} with 2M = 4 concentrates on bin 1.
    NodeVector mode1{{cplx(1, 0), cplx(0, 1), cplx(-1, 0), cplx(0, -1)}};
    const auto s2 = dft_forward(mode1);
    CHECK(std::abs(s2[1] - cplx(4.0)) < 1e-14);
    CHECK(std::abs(s2[0]) < 1e-14);
    CHECK(std::abs(s2[2]) < 1e-14);
    CHECK(std::abs(s2[3]) < 1e-14);

    auto g = testutil::rng(10);
    for (int M : {1, 2, 3, 8, 12, 64, 128}) { // includes non-power-of-two sizes
        NodeVector v{random_cvec(g, static_cast<std::size_t>(2 * M))};
        const auto fast = dft_forward(v);
        const auto slow = dft_forward_oracle(v.values);
        CHECK(max_abs_diff(fast, slow) < 1e-12 * (1.0 + norm2(v.values)));
    }
}

TEST_CASE("inverse transform: roundtrip, impulse, direct-sum oracle") {
    auto g = testutil::rng(11);
    for (int M : {1, 3, 8, 64}) {
        NodeVector v{random_cvec(g, static_cast<std::size_t>(2 * M))};
        const NodeVector back = dft_inverse(dft_forward(v));
        CHECK(max_abs_diff(back.values, v.values) <
              1e-12 * (1.0 + norm2(v.values)));
    }

    std::vector<cplx> impulse(8, cplx(0.0));
    impulse[0] = 8.0; // s_0 = 2M
    const NodeVector ones = dft_inverse(impulse);
    for (const auto& x : ones.values) CHECK(std::abs(x - cplx(1.0)) < 1e-14);

    for (int M : {2, 6}) {
        const auto s = random_cvec(g, static_cast<std::size_t>(2 * M));
        CHECK(max_abs_diff(dft_inverse(s).values, dft_inverse_oracle(s)) <
              1e-12 * (1.0 + norm2(s)));
    }
}

TEST_CASE("mode packing to nodes: constants, pure modes, trig-sum oracle") {
    ModeVector m;
    m.M = 4;
    m.modes.assign(9, cplx(0.0));
    m.at(0) = cplx(2.5, -1.0);
    for (const auto& x : modes_to_nodes(m).values)
        CHECK(std::abs(x - cplx(2.5, -1.0)) < 1e-14);

    m.at(0) = 0.0;
    m.at(1) = 1.0;
    const NodeVector nv = modes_to_nodes(m);
    for (int n = 0; n < 8; ++n) {
        const double th = node_angle(n, 4);
        CHECK(std::abs(nv.values[n] - cplx(std::cos(th), std::sin(th))) < 1e-14);
    }

    auto g = testutil::rng(12);
    for (int M : {1, 2, 3, 8, 37, 64}) {
        const ModeVector r = random_tied_modes(g, M);
        CHECK(max_abs_diff(modes_to_nodes(r).values, trig_nodes_oracle(r)) <
              1e-12 * (1.0 + norm2(r.modes)));
    }
}

TEST_CASE("node interpolation to modes: constants, cosine split, roundtrip") {
    NodeVector c{std::vector<cplx>(12, cplx(0.0, 3.0))};
    const ModeVector mc = nodes_to_modes(c);
    CHECK(std::abs(mc.at(0) - cplx(0.0, 3.0)) < 1e-14);
    for (int k = -6; k <= 6; ++k)
        if (k != 0) CHECK(std::abs(mc.at(k)) < 1e-14);

    // cos(theta_n) splits evenly onto modes +-1.
    NodeVector cosv;
    for (int n = 0; n < 8; ++n)
        cosv.values.push_back(std::cos(node_angle(n, 4)));
    const ModeVector ms = nodes_to_modes(cosv);
    CHECK(std::abs(ms.at(1) - cplx(0.5)) < 1e-14);
    CHECK(std::abs(ms.at(-1) - cplx(0.5)) < 1e-14);
    for (int k : {-4, -3, -2, 0, 2, 3, 4}) CHECK(std::abs(ms.at(k)) < 1e-14);

    auto g = testutil::rng(13);
    for (int M : {1, 2, 5, 48}) {
        NodeVector v{random_cvec(g, static_cast<std::size_t>(2 * M))};
        const ModeVector m = nodes_to_modes(v);
        CHECK(m.at(-M) == m.at(M)); // tie holds exactly by construction
        const NodeVector back = modes_to_nodes(m);
        CHECK(max_abs_diff(back.values, v.values) <
              1e-12 * (1.0 + norm2(v.values)));
    }
}

TEST_CASE("trig evaluation: constants, node consistency, recurrence oracle") {
    ModeVector m;
    m.M = 3;
    m.modes.assign(7, cplx(0.0));
    m.at(0) = cplx(-1.5, 0.25);
    CHECK(std::abs(eval_trig(m, 1.234) - cplx(-1.5, 0.25)) < 1e-14);

    auto g = testutil::rng(14);
    std::uniform_real_distribution<double> th(0.0, 2.0 * M_PI);
    for (int M : {2, 7, 16}) {
        const ModeVector r = random_tied_modes(g, M);
        const NodeVector nv = modes_to_nodes(r);
        for (int n = 0; n < 2 * M; ++n)
            CHECK(std::abs(eval_trig(r, node_angle(n, M)) - nv.values[n]) <
                  1e-12 * (1.0 + norm2(r.modes)));
        for (int rep = 0; rep < 10; ++rep) {
            const double theta = th(g);
            CHECK(std::abs(eval_trig(r, theta) - eval_trig_oracle(r, theta)) <
                  1e-13 * (1.0 + norm2(r.modes)));
        }
    }
}

TEST_CASE("interpolation exactness, conjugate symmetry, linearity, aliasing") {
    auto g = testutil::rng(15);

    // Interpolation exactness at all nodes.
    for (int M : {2, 9}) {
        NodeVector v{random_cvec(g, static_cast<std::size_t>(2 * M))};
        const ModeVector m = nodes_to_modes(v);
        for (int n = 0; n < 2 * M; ++n)
            CHECK(std::abs(eval_trig(m, node_angle(n, M)) - v.values[n]) <
                  1e-12 * (1.0 + norm2(v.values)));
    }

    // Real node data gives Hermitian mode coefficients.
    for (int M : {2, 8}) {
        NodeVector v;
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int n = 0; n < 2 * M; ++n) v.values.push_back(cplx(u(g), 0.0));
        const ModeVector m = nodes_to_modes(v);
        for (int k = 0; k <= M; ++k)
            CHECK(std::abs(m.at(-k) - std::conj(m.at(k))) < 1e-13);
    }

    // Linearity of the interpolation map.
    {
        const int M = 6;
        NodeVector v{random_cvec(g, 12)};
        NodeVector w{random_cvec(g, 12)};
        const cplx alpha(0.7, -1.1);
        NodeVector mix;
        for (int n = 0; n < 12; ++n)
            mix.values.push_back(alpha * v.values[n] + w.values[n]);
        const ModeVector mm = nodes_to_modes(mix);
        const ModeVector mv = nodes_to_modes(v);
        const ModeVector mw = nodes_to_modes(w);
        for (int k = -M; k <= M; ++k)
            CHECK(std::abs(mm.at(k) - (alpha * mv.at(k) + mw.at(k))) < 1e-14 * 20);
    }

    // Signals band-limited to |k| <= M-1 are recovered coefficient-exactly.
    for (int M : {3, 10}) {
        ModeVector truth;
        truth.M = M;
        truth.modes = random_cvec(g, static_cast<std::size_t>(2 * M + 1));
        truth.at(M) = 0.0;
        truth.at(-M) = 0.0;
        NodeVector samples;
        for (int n = 0; n < 2 * M; ++n)
            samples.values.push_back(eval_trig(truth, node_angle(n, M)));
        const ModeVector rec = nodes_to_modes(samples);
        for (int k = -M; k <= M; ++k)
            CHECK(std::abs(rec.at(k) - truth.at(k)) < 1e-12);
    }
}

TEST_CASE("transform input validation") {
    CHECK_THROWS_AS((void)dft_forward(NodeVector{{}}), std::invalid_argument);
    CHECK_THROWS_AS((void)dft_forward(NodeVector{{cplx(1), cplx(2), cplx(3)}}),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)dft_inverse(std::vector<cplx>(5)), std::invalid_argument);
    CHECK_THROWS_AS((void)nodes_to_modes(NodeVector{{cplx(1)}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(Fft(0), std::invalid_argument);
}
