//============================================================================
// test_tps.cpp — truncated power series arithmetic against independent
// brute-force oracles and algebraic identities.
//============================================================================
#include "doctest.h"
#include "test_util.hpp"

#include "oscifour/tps.hpp"

using namespace oscifour;
using testutil::random_cplx;
using testutil::random_series;

namespace {

// Independent O(d^2) convolution written directly from the definition
// c_j = sum_{m=0}^{j} a_m b_{j-m}, kept separate from the library loop.
TruncSeries conv_oracle(const TruncSeries& a, const TruncSeries& b) {
    const int d = a.degree();
    TruncSeries c(d);
    for (int j = 0; j <= d; ++j)
        for (int m = 0; m <= j; ++m) c[j] += a[m] * b[j - m];
    return c;
}

// Naive power-sum evaluation sum c_j * t^j with explicit pow().
cplx eval_oracle(const TruncSeries& a, double t) {
    cplx acc = 0.0;
    for (int j = 0; j <= a.degree(); ++j) acc += a[j] * std::pow(t, j);
    return acc;
}

double series_dist(const TruncSeries& a, const TruncSeries& b) {
    double m = 0.0;
    for (int j = 0; j <= a.degree(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
    return m;
}

} // namespace

TEST_CASE("series addition: cancellation, identity, coefficientwise oracle") {
    const TruncSeries one_plus{cplx(1), cplx(1)};
    const TruncSeries one_minus{cplx(1), cplx(-1)};
    const TruncSeries sum = ts_add(one_plus, one_minus);
    CHECK(sum[0] == cplx(2.0));
    CHECK(sum[1] == cplx(0.0));

    auto g = testutil::rng(1);
    for (int rep = 0; rep < 20; ++rep) {
        const int d = 1 + static_cast<int>(g() % 9);
        const TruncSeries a = random_series(g, d);
        const TruncSeries zero(d);
        CHECK(ts_add(a, zero) == a);

        const TruncSeries b = random_series(g, d);
        const TruncSeries s = ts_add(a, b);
        for (int j = 0; j <= d; ++j) CHECK(s[j] == a[j] + b[j]);
    }
}

TEST_CASE("truncated product: hand cases and brute-force convolution") {
    const TruncSeries p{cplx(1), cplx(1), cplx(0)};       // 1 + t
    const TruncSeries q{cplx(1), cplx(-1), cplx(1)};      // 1 - t + t^2
    const TruncSeries sq = ts_mul(p, p);
    CHECK(sq[0] == cplx(1.0));
    CHECK(sq[1] == cplx(2.0));
    CHECK(sq[2] == cplx(1.0));

    const TruncSeries tele = ts_mul(p, q);                // telescopes to 1
    CHECK(tele[0] == cplx(1.0));
    CHECK(tele[1] == cplx(0.0));
    CHECK(tele[2] == cplx(0.0));

    auto g = testutil::rng(2);
    for (int rep = 0; rep < 50; ++rep) {
        const int d = static_cast<int>(g() % 12);
        const TruncSeries a = random_series(g, d);
        const TruncSeries b = random_series(g, d);
        CHECK(series_dist(ts_mul(a, b), conv_oracle(a, b)) < 1e-13);
    }
}

TEST_CASE("reciprocal: geometric series, constants, product identity") {
    const TruncSeries geom = ts_recip(TruncSeries{cplx(1), cplx(-1), cplx(0), cplx(0)});
    for (int j = 0; j <= 3; ++j) CHECK(std::abs(geom[j] - cplx(1.0)) < 1e-15);

    const TruncSeries half = ts_recip(TruncSeries::constant(2.0, 2));
    CHECK(half[0] == cplx(0.5));
    CHECK(half[1] == cplx(0.0));
    CHECK(half[2] == cplx(0.0));

    auto g = testutil::rng(3);
    for (int rep = 0; rep < 50; ++rep) {
        const int d = static_cast<int>(g() % 10);
        TruncSeries a = random_series(g, d);
        while (std::abs(a[0]) < 0.1) a[0] = random_cplx(g); // keep well-conditioned
        const TruncSeries prod = ts_mul(a, ts_recip(a));
        CHECK(std::abs(prod[0] - cplx(1.0)) < 1e-12);
        for (int j = 1; j <= d; ++j) CHECK(std::abs(prod[j]) < 1e-12);
    }

    CHECK_THROWS_AS((void)ts_recip(TruncSeries{cplx(0), cplx(1)}),
                    SingularSeriesError);
}

TEST_CASE("conjugation: coefficientwise, and a*conj(a) is real on the real axis") {
    const cplx i(0.0, 1.0);
    const TruncSeries a{i, i};
    const TruncSeries ac = ts_conj(a);
    CHECK(ac[0] == -i);
    CHECK(ac[1] == -i);

    const TruncSeries r{cplx(2), cplx(-3), cplx(0.5)};
    CHECK(ts_conj(r) == r);

    auto g = testutil::rng(4);
    for (int rep = 0; rep < 20; ++rep) {
        const int d = 1 + static_cast<int>(g() % 8);
        const TruncSeries b = random_series(g, d);
        const TruncSeries mag = ts_mul(b, ts_conj(b));
        for (double t : {0.0, 0.03, -0.08, 0.1})
            CHECK(std::abs(std::imag(ts_eval(mag, t))) < 1e-14);
    }
}

TEST_CASE("antiderivative: degree raise and shift differentiation inverse") {
    const TruncSeries one = TruncSeries::constant(1.0, 0);
    const TruncSeries t = ts_integrate(one);
    CHECK(t.degree() == 1);
    CHECK(t[0] == cplx(0.0));
    CHECK(t[1] == cplx(1.0));

    const TruncSeries two_t{cplx(0), cplx(2)};
    const TruncSeries t2 = ts_integrate(two_t);
    CHECK(t2.degree() == 2);
    CHECK(t2[1] == cplx(0.0));
    CHECK(t2[2] == cplx(1.0));

    auto g = testutil::rng(5);
    for (int rep = 0; rep < 30; ++rep) {
        const int d = static_cast<int>(g() % 10);
        const TruncSeries a = random_series(g, d);
        const TruncSeries ia = ts_integrate(a);
        CHECK(ia[0] == cplx(0.0));
        for (int j = 0; j <= d; ++j) {
            // shift differentiation: coefficient j of a equals (j+1)*ia_{j+1}
            const cplx back = ia[j + 1] * static_cast<double>(j + 1);
            CHECK(std::abs(back - a[j]) <= 1e-15 * (1.0 + std::abs(a[j])));
        }
    }
}

TEST_CASE("evaluation: Horner against naive power sums") {
    const TruncSeries p{cplx(1), cplx(2), cplx(1)};
    CHECK(ts_eval(p, 1.0) == cplx(4.0));

    auto g = testutil::rng(6);
    std::uniform_real_distribution<double> tdist(-2.0, 2.0);
    for (int rep = 0; rep < 50; ++rep) {
        const int d = static_cast<int>(g() % 12);
        const TruncSeries a = random_series(g, d);
        CHECK(ts_eval(a, 0.0) == a[0]); // exact constant-term read-off
        const double t = tdist(g);
        const cplx ref = eval_oracle(a, t);
        CHECK(std::abs(ts_eval(a, t) - ref) <= 1e-14 * (1.0 + std::abs(ref)));
    }
}

TEST_CASE("ring axioms and mixed identities on random series") {
    auto g = testutil::rng(7);
    std::uniform_real_distribution<double> tdist(-0.1, 0.1);
    for (int rep = 0; rep < 30; ++rep) {
        const int d = 1 + static_cast<int>(g() % 8);
        const TruncSeries a = random_series(g, d);
        const TruncSeries b = random_series(g, d);
        const TruncSeries c = random_series(g, d);

        CHECK(series_dist(ts_mul(a, b), ts_mul(b, a)) < 1e-13);
        CHECK(series_dist(ts_mul(ts_mul(a, b), c), ts_mul(a, ts_mul(b, c))) < 1e-13);
        CHECK(series_dist(ts_mul(a, ts_add(b, c)),
                          ts_add(ts_mul(a, b), ts_mul(a, c))) < 1e-13);

        // conj is a ring homomorphism
        CHECK(series_dist(ts_conj(ts_mul(a, b)), ts_mul(ts_conj(a), ts_conj(b))) <
              1e-14);

        // eval is multiplicative up to the truncation tail: |t| <= 0.1 and
        // unit-scale coefficients bound the dropped terms by ~10*0.1^{d+1}.
        const double t = tdist(g);
        const cplx lhs = ts_eval(ts_mul(a, b), t);
        const cplx rhs = ts_eval(a, t) * ts_eval(b, t);
        CHECK(std::abs(lhs - rhs) <= 10.0 * std::pow(0.1, d + 1));
    }
}

TEST_CASE("degree discipline: mismatches and bad constructions are rejected") {
    const TruncSeries a(2);
    const TruncSeries b(3);
    CHECK_THROWS_AS((void)ts_add(a, b), std::invalid_argument);
    CHECK_THROWS_AS((void)ts_mul(a, b), std::invalid_argument);
    CHECK_THROWS_AS((void)ts_sub(a, b), std::invalid_argument);
    CHECK_THROWS_AS(TruncSeries(-1), std::invalid_argument);
    CHECK_THROWS_AS(TruncSeries(std::vector<cplx>{}), std::invalid_argument);

    // ts_integrate is the single degree-raising operation
    CHECK(ts_integrate(a).degree() == a.degree() + 1);
}
