//============================================================================
// averaging.cpp
//============================================================================
#include "oscifour/averaging.hpp"

#include "oscifour/errors.hpp"

#include <cmath>
#include <complex>

namespace oscifour {

std::vector<cplx> map_U(const TFCoefficients& c, double theta) {
    const int M = c.y.M;
    const int D = c.y.dim;

    std::vector<cplx> ph(static_cast<std::size_t>(2 * M + 1));
    const cplx step(std::cos(theta), std::sin(theta));
    ph[static_cast<std::size_t>(M)] = 1.0;
    for (int k = 1; k <= M; ++k) {
        ph[static_cast<std::size_t>(M + k)] =
            ph[static_cast<std::size_t>(M + k - 1)] * step;
        ph[static_cast<std::size_t>(M - k)] =
            std::conj(ph[static_cast<std::size_t>(M + k)]);
    }

    std::vector<cplx> out(static_cast<std::size_t>(D), cplx(0.0));
    for (int comp = 0; comp < D; ++comp) {
        const cplx* line = c.y.slice(comp, 0);
        cplx acc = 0.0;
        for (int i = 0; i <= 2 * M; ++i)
            acc += line[i] * ph[static_cast<std::size_t>(i)];
        out[static_cast<std::size_t>(comp)] = acc;
    }
    return out;
}

std::vector<cplx> map_W(const TFCoefficients& c, double t) {
    const int M = c.y.M;
    const int D = c.y.dim;
    const int slots = c.y.slots;

    std::vector<cplx> out(static_cast<std::size_t>(D));
    for (int comp = 0; comp < D; ++comp) {
        // Horner over the mode-summed Taylor coefficients; the top slot only
        // carries its mean entry, so the uniform sum costs nothing extra.
        cplx acc = 0.0;
        for (int j = slots - 1; j >= 0; --j) {
            const cplx* line = c.y.slice(comp, j);
            cplx wj = 0.0;
            for (int i = 0; i <= 2 * M; ++i) wj += line[i];
            acc = acc * t + wj;
        }
        out[static_cast<std::size_t>(comp)] = acc;
    }
    return out;
}

std::vector<cplx> map_F(const TFCoefficients& c) {
    if (c.degree < 1)
        throw ConfigError(
            "averaged vector field needs at least one refinement pass "
            "(coefficient degree >= 1)");
    const int M = c.y.M;
    const int D = c.y.dim;

    std::vector<cplx> out(static_cast<std::size_t>(D));
    for (int comp = 0; comp < D; ++comp) {
        const cplx* line = c.y.slice(comp, 1);
        cplx acc = 0.0;
        for (int i = 0; i <= 2 * M; ++i) acc += line[i];
        out[static_cast<std::size_t>(comp)] = acc;
    }
    return out;
}

std::vector<cplx> averaged_compose(const OscillatoryField& field,
                                   const TFConfig& cfg,
                                   std::span<const cplx> y0, double t,
                                   const SolveOptions& opts) {
    const TFCoefficients base = tf_solve(field, y0, cfg, opts);
    return averaged_compose(field, base, t, opts);
}

std::vector<cplx> averaged_compose(const OscillatoryField& field,
                                   const TFCoefficients& base, double t,
                                   const SolveOptions& opts) {
    const std::vector<cplx> w = map_W(base, t);
    const TFCoefficients fresh = tf_solve(field, w, base.config, opts);
    return map_U(fresh, base.config.omega * t);
}

} // namespace oscifour
