//============================================================================
// tfcore.cpp
//
// Refinement passes, closed-form quadrature, evaluation, serialization.
//============================================================================
#include "oscifour/tfcore.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

namespace oscifour {

namespace {

// Minimal fork-join helper: splits [0, n) into contiguous chunks, one per
// worker.  The first exception thrown by any worker is rethrown here.
void parallel_for(int n, int threads,
                  const std::function<void(int, int)>& chunk) {
    if (n <= 0) return;
    const int workers = std::max(1, std::min(threads, n));
    if (workers == 1) {
        chunk(0, n);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex error_mutex;
    const int per = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const int begin = w * per;
        const int end = std::min(n, begin + per);
        if (begin >= end) break;
        pool.emplace_back([&, begin, end] {
            try {
                chunk(begin, end);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

bool all_finite(const std::vector<cplx>& v) {
    for (const auto& x : v)
        if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
    return true;
}

void require_matching(const OscillatoryField& field, const TFConfig& cfg) {
    cfg.validate();
    if (field.dim() != cfg.dim)
        throw ConfigError("field dimension " + std::to_string(field.dim()) +
                          " does not match configured dimension " +
                          std::to_string(cfg.dim));
}

} // namespace

void TFConfig::validate() const {
    if (M < 1) throw ConfigError("M must be >= 1, got " + std::to_string(M));
    if (d < 1) throw ConfigError("d must be >= 1, got " + std::to_string(d));
    if (!(omega > 0.0) || !std::isfinite(omega))
        throw ConfigError("omega must be a positive finite real");
    if (dim < 1) throw ConfigError("dim must be >= 1, got " + std::to_string(dim));
}

TFCoefficients tf_initial(std::span<const cplx> y0, const TFConfig& cfg) {
    cfg.validate();
    if (static_cast<int>(y0.size()) != cfg.dim)
        throw ConfigError("initial condition has " + std::to_string(y0.size()) +
                          " entries, configured dimension is " +
                          std::to_string(cfg.dim));
    TFCoefficients c;
    c.config = cfg;
    c.degree = 0;
    c.y = CoeffTensor(cfg.dim, 2, cfg.M);
    c.y0.assign(y0.begin(), y0.end());
    for (int comp = 0; comp < cfg.dim; ++comp) c.y.at(comp, 0, 0) = y0[comp];
    return c;
}

TFCoefficients quadrature_step(const CoeffTensor& z, std::span<const cplx> y0,
                               const TFConfig& cfg) {
    cfg.validate();
    if (z.dim != cfg.dim || z.M != cfg.M)
        throw ConfigError("integrand tensor shape does not match configuration");
    if (static_cast<int>(y0.size()) != cfg.dim)
        throw ConfigError("initial condition length mismatch in quadrature");
    if (z.slots < 1 || z.slots > cfg.d + 1)
        throw ConfigError("integrand holds Taylor degrees 0.." +
                          std::to_string(z.slots - 1) +
                          ", exceeding the configured degree " +
                          std::to_string(cfg.d));
    const int D = cfg.dim;
    const int M = cfg.M;
    const int q = z.slots - 1; // top degree of the integrand

    TFCoefficients out;
    out.config = cfg;
    out.degree = q;
    out.y = CoeffTensor(D, q + 2, M);
    out.y0.assign(y0.begin(), y0.end());

    for (int c = 0; c < D; ++c) {
        // Oscillatory modes: integrate e^{ik omega t} t^j slices by the
        // descending recursion (exact antiderivative of each mode).
        for (int k = -M; k <= M; ++k) {
            if (k == 0) continue;
            const cplx ikw(0.0, static_cast<double>(k) * cfg.omega);
            cplx above = 0.0; // y_{k,q+1} = 0
            for (int j = q; j >= 0; --j) {
                const cplx val =
                    (z.at(c, j, k) - static_cast<double>(j + 1) * above) / ikw;
                out.y.at(c, j, k) = val;
                above = val;
            }
        }
        // Mean mode: plain antiderivative of the Taylor polynomial.
        for (int j = 0; j <= q; ++j)
            out.y.at(c, j + 1, 0) = z.at(c, j, 0) / static_cast<double>(j + 1);
        // Pin the value at t = 0 to y0.
        cplx osc_sum = 0.0;
        for (int k = -M; k <= M; ++k)
            if (k != 0) osc_sum += out.y.at(c, 0, k);
        out.y.at(c, 0, 0) = y0[c] - osc_sum;
    }
    return out;
}

TFCoefficients tf_pass(const OscillatoryField& field,
                       const TFCoefficients& current, const TFConfig& cfg,
                       int threads) {
    require_matching(field, cfg);
    if (current.config.M != cfg.M || current.config.dim != cfg.dim ||
        current.config.omega != cfg.omega)
        throw ConfigError("pass input was built with a different configuration");
    if (current.degree + 1 > cfg.d)
        throw ConfigError("pass would raise the degree to " +
                          std::to_string(current.degree + 1) +
                          ", beyond the configured d = " + std::to_string(cfg.d));

    const int D = cfg.dim;
    const int M = cfg.M;
    const int N = 2 * M;
    const int slots = current.degree + 2; // jet degree this pass = degree+1
    const int jet_deg = slots - 1;
    const Fft fft(static_cast<std::size_t>(N));

    // Step 1: current modes -> node values, one transform per (component,
    // degree) slice, scattered into node-major storage.
    NodeValues nodes(D, slots, N);
    parallel_for(D * slots, threads, [&](int begin, int end) {
        std::vector<cplx> scratch(static_cast<std::size_t>(N));
        std::vector<cplx> line(static_cast<std::size_t>(N));
        for (int task = begin; task < end; ++task) {
            const int c = task / slots;
            const int j = task % slots;
            modes_to_nodes_span(current.y.slice(c, j), line.data(), M, fft,
                                scratch.data());
            for (int n = 0; n < N; ++n) nodes.jet(n, c)[j] = line[n];
        }
    });

    // Step 2: evaluate the field on each node's jets (in place).
    parallel_for(N, threads, [&](int begin, int end) {
        std::vector<TruncSeries> yin(static_cast<std::size_t>(D),
                                     TruncSeries(jet_deg));
        std::vector<TruncSeries> yout(static_cast<std::size_t>(D),
                                      TruncSeries(jet_deg));
        for (int n = begin; n < end; ++n) {
            for (int c = 0; c < D; ++c)
                std::copy_n(nodes.jet(n, c), slots, yin[c].data());
            field.eval_jet(node_angle(n, M), yin, yout);
            for (int c = 0; c < D; ++c)
                std::copy_n(yout[c].data(), slots, nodes.jet(n, c));
        }
    });

    // Step 3: node values -> integrand modes, per (component, degree) slice.
    CoeffTensor z(D, slots, M);
    parallel_for(D * slots, threads, [&](int begin, int end) {
        std::vector<cplx> scratch(static_cast<std::size_t>(N));
        std::vector<cplx> line(static_cast<std::size_t>(N));
        for (int task = begin; task < end; ++task) {
            const int c = task / slots;
            const int j = task % slots;
            for (int n = 0; n < N; ++n) line[n] = nodes.jet(n, c)[j];
            nodes_to_modes_span(line.data(), z.slice(c, j), M, fft,
                                scratch.data());
        }
    });

    // Step 4: exact quadrature.
    return quadrature_step(z, current.y0, cfg);
}

namespace {

// Re-runs the final pass on the degree-(d-1) restriction of a finished
// solve (drops the top mean slot), producing a degree-d object again.
TFCoefficients repeat_final_pass(const OscillatoryField& field,
                                 const TFCoefficients& done, const TFConfig& cfg,
                                 int threads) {
    TFCoefficients trimmed;
    trimmed.config = cfg;
    trimmed.degree = done.degree - 1;
    trimmed.y = CoeffTensor(cfg.dim, done.y.slots - 1, cfg.M);
    trimmed.y0 = done.y0;
    for (int c = 0; c < cfg.dim; ++c)
        for (int j = 0; j < trimmed.y.slots; ++j)
            std::copy_n(done.y.slice(c, j), 2 * cfg.M + 1, trimmed.y.slice(c, j));
    return tf_pass(field, trimmed, cfg, threads);
}

} // namespace

TFCoefficients tf_solve(const OscillatoryField& field, std::span<const cplx> y0,
                        const TFConfig& cfg, const SolveOptions& opts) {
    require_matching(field, cfg);
    TFCoefficients c = tf_initial(y0, cfg);
    for (int pass = 1; pass <= cfg.d; ++pass) {
        c = tf_pass(field, c, cfg, opts.threads);
        if (!all_finite(c.y.v))
            throw DivergenceError("refinement pass " + std::to_string(pass) +
                                      " produced non-finite coefficients",
                                  pass);
    }
    for (int extra = 0; extra < opts.extra_passes; ++extra) {
        c = repeat_final_pass(field, c, cfg, opts.threads);
        if (!all_finite(c.y.v))
            throw DivergenceError("polishing pass " +
                                      std::to_string(cfg.d + extra + 1) +
                                      " produced non-finite coefficients",
                                  cfg.d + extra + 1);
    }
    return c;
}

std::vector<cplx> tf_eval(const TFCoefficients& c, double t) {
    const int D = c.y.dim;
    const int M = c.y.M;
    const int slots = c.y.slots;
    // Phase ladder e^{i k omega t}, shared across components.
    std::vector<cplx> phase(static_cast<std::size_t>(2 * M + 1));
    for (int k = -M; k <= M; ++k) {
        const double arg = static_cast<double>(k) * c.config.omega * t;
        phase[static_cast<std::size_t>(k + M)] = {std::cos(arg), std::sin(arg)};
    }
    std::vector<cplx> out(static_cast<std::size_t>(D));
    const int stride = 2 * M + 1; // slot-to-slot distance within a component
    for (int comp = 0; comp < D; ++comp) {
        const cplx* base = c.y.slice(comp, 0);
        cplx acc = 0.0;
        for (int k = 0; k < 2 * M + 1; ++k) {
            const cplx* col = base + k;
            cplx val = col[static_cast<std::size_t>(slots - 1) * stride];
            for (int j = slots - 2; j >= 0; --j)
                val = val * t + col[static_cast<std::size_t>(j) * stride];
            acc += phase[static_cast<std::size_t>(k)] * val;
        }
        out[static_cast<std::size_t>(comp)] = acc;
    }
    return out;
}

std::vector<cplx> tf_eval_x(const LinearExp& linear_exp, const TFCoefficients& c,
                            double t) {
    std::vector<cplx> v = tf_eval(c, t);
    linear_exp(c.config.omega * t, v);
    return v;
}

//--- serialization -----------------------------------------------------------------

namespace {

constexpr char kMagic[4] = {'O', 'T', 'F', '1'};
constexpr std::uint32_t kFormatVersion = 1;

void put_u32(std::string& buf, std::uint32_t x) {
    for (int b = 0; b < 4; ++b)
        buf.push_back(static_cast<char>((x >> (8 * b)) & 0xffu));
}

void put_f64(std::string& buf, double x) {
    const std::uint64_t bits = std::bit_cast<std::uint64_t>(x);
    for (int b = 0; b < 8; ++b)
        buf.push_back(static_cast<char>((bits >> (8 * b)) & 0xffu));
}

struct Reader {
    const unsigned char* p;
    std::size_t size;
    std::size_t off = 0;

    void need(std::size_t n, const char* what) const {
        if (off + n > size)
            throw IoError("parse error at byte " + std::to_string(off) +
                              ": truncated while reading " + what,
                          static_cast<long long>(off));
    }
    std::uint32_t u32(const char* what) {
        need(4, what);
        std::uint32_t x = 0;
        for (int b = 0; b < 4; ++b)
            x |= static_cast<std::uint32_t>(p[off + b]) << (8 * b);
        off += 4;
        return x;
    }
    double f64(const char* what) {
        need(8, what);
        std::uint64_t bits = 0;
        for (int b = 0; b < 8; ++b)
            bits |= static_cast<std::uint64_t>(p[off + b]) << (8 * b);
        off += 8;
        return std::bit_cast<double>(bits);
    }
    std::string bytes(std::size_t n, const char* what) {
        need(n, what);
        std::string s(reinterpret_cast<const char*>(p + off), n);
        off += n;
        return s;
    }
};

} // namespace

void tf_save(const TFCoefficients& c, const std::string& path,
             const std::string& problem_id) {
    std::string buf;
    buf.reserve(64 + problem_id.size() + 16 * (c.y0.size() + c.y.v.size()));
    buf.append(kMagic, 4);
    put_u32(buf, kFormatVersion);
    put_u32(buf, static_cast<std::uint32_t>(c.y.dim));
    put_u32(buf, static_cast<std::uint32_t>(c.y.M));
    put_u32(buf, static_cast<std::uint32_t>(c.degree));
    put_f64(buf, c.config.omega);
    put_u32(buf, static_cast<std::uint32_t>(problem_id.size()));
    buf.append(problem_id);
    for (const auto& x : c.y0) {
        put_f64(buf, x.real());
        put_f64(buf, x.imag());
    }
    for (const auto& x : c.y.v) {
        put_f64(buf, x.real());
        put_f64(buf, x.imag());
    }

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw IoError("write failed for '" + path + "'");
    out.close();

    std::ofstream meta(path + ".meta", std::ios::trunc);
    if (!meta) throw IoError("cannot open '" + path + ".meta' for writing");
    char omega_txt[32];
    std::snprintf(omega_txt, sizeof omega_txt, "%.17g", c.config.omega);
    meta << "format_version = " << kFormatVersion << "\n"
         << "dim = " << c.y.dim << "\n"
         << "M = " << c.y.M << "\n"
         << "d = " << c.degree << "\n"
         << "omega = " << omega_txt << "\n"
         << "problem = " << problem_id << "\n";
    if (!meta) throw IoError("write failed for '" + path + ".meta'");
}

LoadedCoefficients tf_load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::string data((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());

    Reader r{reinterpret_cast<const unsigned char*>(data.data()), data.size()};
    const std::string magic = r.bytes(4, "magic");
    if (std::memcmp(magic.data(), kMagic, 4) != 0)
        throw IoError("parse error at byte 0: not a coefficient file", 0);
    const std::uint32_t version = r.u32("format version");
    if (version != kFormatVersion)
        throw IoError("schema error: unsupported format version " +
                      std::to_string(version));
    const std::uint32_t D = r.u32("dimension");
    const std::uint32_t M = r.u32("M");
    const std::uint32_t d = r.u32("d");
    const double omega = r.f64("omega");
    if (D < 1 || M < 1 || d < 1 || !(omega > 0.0) || !std::isfinite(omega))
        throw IoError("schema error: invalid header values (D=" +
                      std::to_string(D) + ", M=" + std::to_string(M) +
                      ", d=" + std::to_string(d) + ")");
    const std::uint32_t idlen = r.u32("problem id length");
    std::string problem_id = r.bytes(idlen, "problem id");

    const std::size_t header_end = r.off;
    const std::size_t tensor_count =
        static_cast<std::size_t>(D) * (d + 2) * (2 * M + 1);
    const std::size_t expect_bytes = (D + tensor_count) * 16;
    const std::size_t avail = data.size() - header_end;
    if (avail % 16 != 0) {
        // The payload ends partway through a complex value: the file was cut.
        const std::size_t bad = header_end + (avail / 16) * 16;
        throw IoError("parse error at byte " + std::to_string(bad) +
                          ": truncated mid-value",
                      static_cast<long long>(bad));
    }
    if (avail != expect_bytes)
        throw IoError("schema error: payload holds " +
                      std::to_string(avail / 16) +
                      " complex values, header implies " +
                      std::to_string(D + tensor_count));

    LoadedCoefficients loaded;
    loaded.problem_id = std::move(problem_id);
    TFCoefficients& c = loaded.coeffs;
    c.config = TFConfig{static_cast<int>(M), static_cast<int>(d), omega,
                        static_cast<int>(D)};
    c.degree = static_cast<int>(d);
    c.y = CoeffTensor(static_cast<int>(D), static_cast<int>(d) + 2,
                      static_cast<int>(M));
    c.y0.resize(D);
    for (auto& x : c.y0) {
        const double re = r.f64("initial condition");
        const double im = r.f64("initial condition");
        x = {re, im};
    }
    for (auto& x : c.y.v) {
        const double re = r.f64("coefficient tensor");
        const double im = r.f64("coefficient tensor");
        x = {re, im};
    }
    return loaded;
}

} // namespace oscifour
