//============================================================================
// fourier.hpp
//
// Discrete Fourier transforms and the mode-packing conventions that connect
// the two representations used throughout the solver:
//
//   ModeVector  m_k,  k = -M..M   (2M+1 trig-polynomial coefficients,
//                                  stored with the tie m_{-M} = m_{+M})
//   NodeVector  v_n,  n = 0..2M-1 (values at the nodes theta_n = n*pi/M)
//
// Conventions (fixed, used verbatim by the solver core):
//   dft_forward :  S_k = sum_n e^{-i k n pi / M} v_n            (unnormalized)
//   dft_inverse :  v_n = (1/2M) sum_k e^{+i k n pi / M} S_k
//
//   modes -> nodes packing:   S_0 = 2M m_0
//                             S_k = 2M m_k             k = 1..M-1
//                             S_M = 2M (m_M + m_{-M})
//                             S_{2M-k} = 2M m_{-k}     k = 1..M-1
//   nodes -> modes unpacking: m_0 = S_0/(2M)
//                             m_{+-M} = S_M/(4M)       (the +-M split)
//                             m_k = S_k/(2M), m_{-k} = S_{2M-k}/(2M)
//
// The transform engine is a self-contained iterative radix-2 FFT; lengths
// that are not a power of two fall back to Bluestein's chirp-z algorithm,
// which is a constant factor ~4x slower (three power-of-two FFTs of about
// twice the length plus O(n) chirp multiplies).  Both paths are O(n log n)
// and exact to rounding; only the speed differs.
//============================================================================
#pragma once

#include "oscifour/tps.hpp" // for cplx

#include <cmath>
#include <cstddef>
#include <vector>

namespace oscifour {

//--- transform engine ---------------------------------------------------------

// Precomputed tables for complex DFTs of one fixed length n >= 1.
// Instances are immutable after construction and safe to share across
// threads; forward/inverse work in place on caller-owned buffers.
class Fft {
public:
    explicit Fft(std::size_t n);

    std::size_t size() const { return n_; }

    // In-place unnormalized forward transform: X_k = sum x_n e^{-2pi i nk/n}.
    void forward(cplx* data) const { transform(data, -1); }

    // In-place inverse transform with 1/n normalization.
    void inverse(cplx* data) const;

private:
    void transform(cplx* data, int sign) const;
    void pow2_transform(cplx* data, std::size_t n, int sign) const;
    void bluestein(cplx* data, int sign) const;

    std::size_t n_ = 0;
    bool pow2_ = false;
    std::vector<cplx> twiddle_;       // e^{-2pi i j / n_pad} tables (radix-2)
    // Bluestein tables (empty when n_ is a power of two):
    std::size_t npad_ = 0;            // power-of-two length >= 2n-1
    std::vector<cplx> chirp_;         // w_j = e^{-i pi j^2 / n}
    std::vector<cplx> chirp_fft_;     // forward FFT of the padded conj chirp
};

//--- domain types -------------------------------------------------------------

// Trig-polynomial coefficients m_k, k = -M..M, stored as modes[k+M].
// Vectors produced by nodes_to_modes satisfy the uniqueness tie
// modes[0] == modes[2M] (i.e. m_{-M} == m_{+M}).
struct ModeVector {
    int M = 0;
    std::vector<cplx> modes; // size 2M+1

    cplx& at(int k) { return modes[static_cast<std::size_t>(k + M)]; }
    const cplx& at(int k) const { return modes[static_cast<std::size_t>(k + M)]; }
};

// Values at the 2M equispaced nodes theta_n = n*pi/M, n = 0..2M-1.
struct NodeVector {
    std::vector<cplx> values; // size 2M
};

inline double node_angle(int n, int M) { return static_cast<double>(n) * M_PI / M; }

//--- transforms and conversions -----------------------------------------------

// S_k = sum_{n=0}^{2M-1} e^{-i k n pi / M} v_n  (length must be even, >= 2).
std::vector<cplx> dft_forward(const NodeVector& v);

// v_n = (1/2M) sum_{k=0}^{2M-1} e^{+i k n pi / M} s_k.
NodeVector dft_inverse(const std::vector<cplx>& s);

// Evaluate sum_{k=-M}^{M} e^{i k theta_n} m_k at all 2M nodes (pack + inverse
// DFT).  Only the sum m_{-M} + m_{+M} can influence node values, since
// e^{+-iM theta_n} coincide at every node.
NodeVector modes_to_nodes(const ModeVector& m);

// The unique ModeVector interpolating v at all nodes subject to the +-M tie.
ModeVector nodes_to_modes(const NodeVector& v);

// Direct evaluation of sum_{k=-M}^{M} e^{i k theta} m_k at arbitrary theta.
cplx eval_trig(const ModeVector& m, double theta);

//--- allocation-free kernels (solver hot path) ---------------------------------
// Both expect fft.size() == 2M and a caller-provided scratch of length 2M.
// `modes` has 2M+1 entries in k = -M..M order; `nodes` has 2M entries.

void modes_to_nodes_span(const cplx* modes, cplx* nodes, int M, const Fft& fft,
                         cplx* scratch);
void nodes_to_modes_span(const cplx* nodes, cplx* modes, int M, const Fft& fft,
                         cplx* scratch);

} // namespace oscifour
