//============================================================================
// fourier.cpp
//
// Transform engine (iterative radix-2 FFT + Bluestein fallback) and the
// mode/node conversions documented in fourier.hpp.
//============================================================================
#include "oscifour/fourier.hpp"

#include <cmath>
#include <stdexcept>

namespace oscifour {

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// e^{-i pi j^2 / n} with exact integer range reduction: j^2 mod 2n keeps the
// argument within one period so large j lose no precision.
cplx chirp_phase(std::size_t j, std::size_t n) {
    const long long m = static_cast<long long>(j) * static_cast<long long>(j) %
                        (2LL * static_cast<long long>(n));
    const double arg = -M_PI * static_cast<double>(m) / static_cast<double>(n);
    return {std::cos(arg), std::sin(arg)};
}

} // namespace

Fft::Fft(std::size_t n) : n_(n), pow2_(is_pow2(n)) {
    if (n == 0) throw std::invalid_argument("Fft: length must be >= 1");
    const std::size_t ntab = pow2_ ? n : next_pow2(2 * n - 1);
    npad_ = pow2_ ? 0 : ntab;
    // Twiddles e^{-2 pi i j / ntab}, j = 0..ntab/2-1, for the radix-2 core.
    twiddle_.resize(ntab / 2);
    for (std::size_t j = 0; j < ntab / 2; ++j) {
        const double arg = -2.0 * M_PI * static_cast<double>(j) /
                           static_cast<double>(ntab);
        twiddle_[j] = {std::cos(arg), std::sin(arg)};
    }
    if (!pow2_) {
        // Chirp w_j = e^{-i pi j^2 / n} and the padded FFT of its conjugate,
        // symmetric about 0 (linear convolution embedded circularly).
        chirp_.resize(n_);
        for (std::size_t j = 0; j < n_; ++j) chirp_[j] = chirp_phase(j, n_);
        chirp_fft_.assign(npad_, cplx(0.0, 0.0));
        for (std::size_t j = 0; j < n_; ++j) {
            const cplx v = std::conj(chirp_[j]);
            chirp_fft_[j] = v;
            if (j > 0) chirp_fft_[npad_ - j] = v;
        }
        pow2_transform(chirp_fft_.data(), npad_, -1);
    }
}

void Fft::inverse(cplx* data) const {
    transform(data, +1);
    const double scale = 1.0 / static_cast<double>(n_);
    for (std::size_t j = 0; j < n_; ++j) data[j] *= scale;
}

void Fft::transform(cplx* data, int sign) const {
    if (n_ == 1) return;
    if (pow2_)
        pow2_transform(data, n_, sign);
    else
        bluestein(data, sign);
}

// Iterative Cooley-Tukey, decimation in time.  `n` is n_ for the main
// transform or npad_ for the Bluestein inner transforms; the twiddle table
// is laid out for the larger of the two, indexed with a stride.
void Fft::pow2_transform(cplx* data, std::size_t n, int sign) const {
    // Bit-reversal permutation.
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }
    const std::size_t tab_n = twiddle_.size() * 2;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = tab_n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t j = 0; j < len / 2; ++j) {
                cplx w = twiddle_[j * stride];
                if (sign > 0) w = std::conj(w);
                const cplx u = data[i + j];
                const cplx t = w * data[i + j + len / 2];
                data[i + j] = u + t;
                data[i + j + len / 2] = u - t;
            }
        }
    }
}

// Chirp-z: X_k = w_k * sum_n (x_n w_n) conj(w_{k-n}),  w_j = e^{-i pi j^2/n},
// with the convolution done by three power-of-two FFTs of length npad_.
void Fft::bluestein(cplx* data, int sign) const {
    if (sign > 0) {
        // Inverse via conj-forward-conj; the caller handles normalization.
        for (std::size_t j = 0; j < n_; ++j) data[j] = std::conj(data[j]);
        bluestein(data, -1);
        for (std::size_t j = 0; j < n_; ++j) data[j] = std::conj(data[j]);
        return;
    }
    std::vector<cplx> buf(npad_, cplx(0.0, 0.0));
    for (std::size_t j = 0; j < n_; ++j) buf[j] = data[j] * chirp_[j];
    pow2_transform(buf.data(), npad_, -1);
    for (std::size_t j = 0; j < npad_; ++j) buf[j] *= chirp_fft_[j];
    pow2_transform(buf.data(), npad_, +1);
    const double scale = 1.0 / static_cast<double>(npad_);
    for (std::size_t j = 0; j < n_; ++j) data[j] = buf[j] * (scale * chirp_[j]);
}

//--- public transforms ---------------------------------------------------------

namespace {
void require_even_nonzero(std::size_t len, const char* op) {
    if (len == 0 || len % 2 != 0)
        throw std::invalid_argument(std::string(op) +
                                    ": length must be even and nonzero, got " +
                                    std::to_string(len));
}
} // namespace

std::vector<cplx> dft_forward(const NodeVector& v) {
    require_even_nonzero(v.values.size(), "dft_forward");
    std::vector<cplx> out = v.values;
    Fft fft(out.size());
    fft.forward(out.data());
    return out;
}

NodeVector dft_inverse(const std::vector<cplx>& s) {
    require_even_nonzero(s.size(), "dft_inverse");
    NodeVector out{s};
    Fft fft(s.size());
    fft.inverse(out.values.data());
    return out;
}

void modes_to_nodes_span(const cplx* modes, cplx* nodes, int M, const Fft& fft,
                         cplx* scratch) {
    const int N = 2 * M;
    const double twoM = static_cast<double>(N);
    scratch[0] = twoM * modes[M]; // k = 0
    for (int k = 1; k < M; ++k) {
        scratch[k] = twoM * modes[M + k];
        scratch[N - k] = twoM * modes[M - k];
    }
    scratch[M] = twoM * (modes[2 * M] + modes[0]); // folded +-M pair
    fft.inverse(scratch);
    for (int n = 0; n < N; ++n) nodes[n] = scratch[n];
}

void nodes_to_modes_span(const cplx* nodes, cplx* modes, int M, const Fft& fft,
                         cplx* scratch) {
    const int N = 2 * M;
    for (int n = 0; n < N; ++n) scratch[n] = nodes[n];
    fft.forward(scratch);
    const double inv = 1.0 / static_cast<double>(N);
    modes[M] = scratch[0] * inv; // k = 0
    for (int k = 1; k < M; ++k) {
        modes[M + k] = scratch[k] * inv;
        modes[M - k] = scratch[N - k] * inv;
    }
    const cplx split = scratch[M] * (0.5 * inv); // S_M / (4M)
    modes[2 * M] = split;
    modes[0] = split;
}

NodeVector modes_to_nodes(const ModeVector& m) {
    if (m.M < 1 || m.modes.size() != static_cast<std::size_t>(2 * m.M + 1))
        throw std::invalid_argument("modes_to_nodes: need 2M+1 modes, M >= 1");
    NodeVector out;
    out.values.resize(static_cast<std::size_t>(2 * m.M));
    Fft fft(out.values.size());
    std::vector<cplx> scratch(out.values.size());
    modes_to_nodes_span(m.modes.data(), out.values.data(), m.M, fft,
                        scratch.data());
    return out;
}

ModeVector nodes_to_modes(const NodeVector& v) {
    require_even_nonzero(v.values.size(), "nodes_to_modes");
    const int M = static_cast<int>(v.values.size() / 2);
    ModeVector out;
    out.M = M;
    out.modes.resize(static_cast<std::size_t>(2 * M + 1));
    Fft fft(v.values.size());
    std::vector<cplx> scratch(v.values.size());
    nodes_to_modes_span(v.values.data(), out.modes.data(), M, fft,
                        scratch.data());
    return out;
}

cplx eval_trig(const ModeVector& m, double theta) {
    cplx acc = 0.0;
    for (int k = -m.M; k <= m.M; ++k) {
        const double arg = static_cast<double>(k) * theta;
        acc += cplx(std::cos(arg), std::sin(arg)) * m.at(k);
    }
    return acc;
}

} // namespace oscifour
