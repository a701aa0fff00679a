//============================================================================
// tps.hpp
//
// Truncated power series ("jets") in a real variable t with complex
// coefficients, truncated at a fixed degree d:
//
//     a(t) = a_0 + a_1 t + ... + a_d t^d        (+ O(t^{d+1}), discarded)
//
// This is the arithmetic every field evaluation runs on: propagating jets
// through a nonlinearity yields the Taylor expansion of f(y(t)) without any
// differentiation code.  All binary operations require equal degrees; mixing
// degrees is a programming error and throws std::invalid_argument.  The one
// operation that raises the degree is ts_integrate (d -> d+1), which is what
// a solver pass uses to gain one order per iteration.
//
// Conjugation acts coefficient-wise.  That is only valid because t is real:
// conj(a(t)) = sum conj(a_j) t^j.  Nothing here supports complex t.
//============================================================================
#pragma once

#include "oscifour/errors.hpp"

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

namespace oscifour {

using cplx = std::complex<double>;

class TruncSeries {
public:
    // Zero series of the given degree (degree >= 0).
    explicit TruncSeries(int degree)
        : c_(static_cast<std::size_t>(check_degree(degree)) + 1) {}

    // Series from explicit coefficients c_0..c_d (must be non-empty).
    explicit TruncSeries(std::vector<cplx> coeffs) : c_(std::move(coeffs)) {
        if (c_.empty())
            throw std::invalid_argument("TruncSeries: empty coefficient list");
    }

    TruncSeries(std::initializer_list<cplx> coeffs)
        : TruncSeries(std::vector<cplx>(coeffs)) {}

    // Constant jet  value + 0*t + ... + 0*t^degree.
    static TruncSeries constant(cplx value, int degree) {
        TruncSeries s(degree);
        s.c_[0] = value;
        return s;
    }

    int degree() const { return static_cast<int>(c_.size()) - 1; }

    cplx& operator[](int j) { return c_[static_cast<std::size_t>(j)]; }
    const cplx& operator[](int j) const { return c_[static_cast<std::size_t>(j)]; }

    cplx* data() { return c_.data(); }
    const cplx* data() const { return c_.data(); }

    const std::vector<cplx>& coeffs() const { return c_; }

    bool operator==(const TruncSeries& o) const { return c_ == o.c_; }

private:
    static int check_degree(int degree) {
        if (degree < 0)
            throw std::invalid_argument("TruncSeries: negative degree");
        return degree;
    }

    std::vector<cplx> c_;
};

namespace detail {
inline void require_same_degree(const TruncSeries& a, const TruncSeries& b,
                                const char* op) {
    if (a.degree() != b.degree())
        throw std::invalid_argument(std::string(op) + ": degree mismatch (" +
                                    std::to_string(a.degree()) + " vs " +
                                    std::to_string(b.degree()) + ")");
}
} // namespace detail

//--- allocation-free kernels ------------------------------------------------
// `out` must not alias an input and must already have the right degree.

inline void ts_mul_into(const TruncSeries& a, const TruncSeries& b,
                        TruncSeries& out) {
    detail::require_same_degree(a, b, "ts_mul");
    detail::require_same_degree(a, out, "ts_mul");
    const int d = a.degree();
    const cplx* pa = a.data();
    const cplx* pb = b.data();
    cplx* po = out.data();
    for (int j = 0; j <= d; ++j) {
        cplx acc = 0.0;
        for (int m = 0; m <= j; ++m) acc += pa[m] * pb[j - m];
        po[j] = acc;
    }
}

inline void ts_conj_into(const TruncSeries& a, TruncSeries& out) {
    detail::require_same_degree(a, out, "ts_conj");
    const int d = a.degree();
    for (int j = 0; j <= d; ++j) out[j] = std::conj(a[j]);
}

// out += s * a
inline void ts_axpy(cplx s, const TruncSeries& a, TruncSeries& out) {
    detail::require_same_degree(a, out, "ts_axpy");
    const int d = a.degree();
    for (int j = 0; j <= d; ++j) out[j] += s * a[j];
}

//--- value-returning operations ----------------------------------------------

inline TruncSeries ts_add(const TruncSeries& a, const TruncSeries& b) {
    detail::require_same_degree(a, b, "ts_add");
    TruncSeries r(a.degree());
    for (int j = 0; j <= a.degree(); ++j) r[j] = a[j] + b[j];
    return r;
}

inline TruncSeries ts_sub(const TruncSeries& a, const TruncSeries& b) {
    detail::require_same_degree(a, b, "ts_sub");
    TruncSeries r(a.degree());
    for (int j = 0; j <= a.degree(); ++j) r[j] = a[j] - b[j];
    return r;
}

// Truncated Cauchy product: c_j = sum_{m=0}^{j} a_m b_{j-m}.
inline TruncSeries ts_mul(const TruncSeries& a, const TruncSeries& b) {
    detail::require_same_degree(a, b, "ts_mul");
    TruncSeries r(a.degree());
    ts_mul_into(a, b, r);
    return r;
}

// Multiplicative inverse.  Standard triangular recurrence:
//   b_0 = 1/a_0,   b_j = -(sum_{m=1}^{j} a_m b_{j-m}) / a_0.
// Throws SingularSeriesError when the constant term vanishes.
inline TruncSeries ts_recip(const TruncSeries& a) {
    const int d = a.degree();
    if (a[0] == cplx(0.0, 0.0))
        throw SingularSeriesError("ts_recip: constant term is zero");
    TruncSeries r(d);
    const cplx inv0 = 1.0 / a[0];
    r[0] = inv0;
    for (int j = 1; j <= d; ++j) {
        cplx acc = 0.0;
        for (int m = 1; m <= j; ++m) acc += a[m] * r[j - m];
        r[j] = -acc * inv0;
    }
    return r;
}

// Coefficient-wise conjugation (valid for real t only).
inline TruncSeries ts_conj(const TruncSeries& a) {
    TruncSeries r(a.degree());
    ts_conj_into(a, r);
    return r;
}

// Antiderivative with zero constant term; the result has degree d+1:
//   (integral a)(t) = sum_{j=0}^{d} a_j t^{j+1} / (j+1).
inline TruncSeries ts_integrate(const TruncSeries& a) {
    const int d = a.degree();
    TruncSeries r(d + 1);
    r[0] = 0.0;
    for (int j = 0; j <= d; ++j) r[j + 1] = a[j] / static_cast<double>(j + 1);
    return r;
}

// Horner evaluation at a real point.
inline cplx ts_eval(const TruncSeries& a, double t) {
    const int d = a.degree();
    cplx acc = a[d];
    for (int j = d - 1; j >= 0; --j) acc = acc * t + a[j];
    return acc;
}

//--- operator sugar (delegates to the functions above) ------------------------

inline TruncSeries operator+(const TruncSeries& a, const TruncSeries& b) { return ts_add(a, b); }
inline TruncSeries operator-(const TruncSeries& a, const TruncSeries& b) { return ts_sub(a, b); }
inline TruncSeries operator*(const TruncSeries& a, const TruncSeries& b) { return ts_mul(a, b); }

inline TruncSeries operator*(cplx s, const TruncSeries& a) {
    TruncSeries r(a.degree());
    for (int j = 0; j <= a.degree(); ++j) r[j] = s * a[j];
    return r;
}
inline TruncSeries operator*(double s, const TruncSeries& a) { return cplx(s, 0.0) * a; }

inline TruncSeries operator-(const TruncSeries& a) { return cplx(-1.0, 0.0) * a; }

} // namespace oscifour
