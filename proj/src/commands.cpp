//============================================================================
// commands.cpp
//
// Implementation of the solve/eval/errors/averaged operations.  All CSV
// output goes through one writer that formats doubles with "%.17g" and
// fails with IoError when the target cannot be opened or written.  The
// commands share build_problem(), which owns the config -> field wiring:
//
//   linear-test  f(theta, y) = amplitude e^{i mode theta}, dim 1, identity
//                frame (no linear part)
//   nls          2J-node collocation in the rotated variable, frame action
//                e^{theta A} applied spectrally
//   kepler-j2    stacked (alpha, beta) oscillator components of the KS
//                coordinates; frequency fixed by the orbit energy
//============================================================================
#include "oscifour/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <utility>

#include "oscifour/averaging.hpp"
#include "oscifour/errors.hpp"

namespace oscifour {
namespace {

std::string num17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

// One CSV data product: header once, then rows of %.17g fields.
class CsvWriter {
public:
    explicit CsvWriter(const std::string& path) : path_(path), out_(path) {
        if (!out_) throw IoError("cannot open '" + path + "' for writing");
    }
    void header(const std::string& line) { out_ << line << '\n'; }
    void begin_row(double t) {
        row_.clear();
        row_ += num17(t);
    }
    void field(double v) {
        row_ += ", ";
        row_ += num17(v);
    }
    void field(const std::string& text) {
        row_ += ", ";
        row_ += text;
    }
    void field(cplx v) {
        field(v.real());
        field(v.imag());
    }
    void end_row() {
        out_ << row_ << '\n';
        ++rows_;
    }
    long rows() const { return rows_; }
    void close() {
        out_.flush();
        if (!out_) throw IoError("write to '" + path_ + "' failed");
    }

private:
    std::string path_;
    std::ofstream out_;
    std::string row_;
    long rows_ = 0;
};

void require_discretization(const RunConfig& cfg) {
    if (cfg.M < 1)
        throw ConfigError("key 'M': required (a positive harmonic count) "
                          "for this command");
    if (cfg.d < 1)
        throw ConfigError("key 'd': required (a positive Taylor degree) "
                          "for this command");
}

std::string default_out(const RunConfig& cfg, const std::string& suffix) {
    return cfg.out.empty() ? cfg.problem + suffix : cfg.out;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
}

// (u, u') read off a rotated state vector x = e^{theta A} y.
void split_real_state(const std::vector<cplx>& x, std::array<double, 4>& u,
                      std::array<double, 4>& uprime) {
    for (int i = 0; i < 4; ++i) {
        u[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)].real();
        uprime[static_cast<std::size_t>(i)] =
            x[static_cast<std::size_t>(i) + 4].real();
    }
}

} // namespace

Problem build_problem(const RunConfig& cfg) {
    Problem p;
    if (cfg.problem == "linear-test") {
        auto f = std::make_shared<LinearTestField>(cfg.amplitude, cfg.mode);
        p.field = f;
        p.y0 = {cfg.y0};
        p.omega = cfg.omega.value_or(1.0);
        p.exp = [](double, std::span<cplx>) {};
        p.pointwise = [f](double theta, std::span<const cplx>,
                          std::span<cplx> out) { out[0] = f->value(theta); };
        p.id = "linear-test amplitude=(" + num(cfg.amplitude.real()) + "," +
               num(cfg.amplitude.imag()) + ") mode=" + std::to_string(cfg.mode);
    } else if (cfg.problem == "nls") {
        if (cfg.J < 2)
            throw ConfigError("key 'J': required (>= 2) for problem 'nls'");
        p.omega = cfg.omega.value_or(1.0);
        auto f = std::make_shared<NLSField>(
            nls_build(cfg.J, cfg.epsilon, p.omega));
        p.field = f;
        p.y0 = f->problem().initial;
        p.exp = f->exp_map();
        p.pointwise = [f](double theta, std::span<const cplx> y,
                          std::span<cplx> out) { f->pointwise(theta, y, out); };
        p.id = "nls J=" + std::to_string(cfg.J) + " epsilon=" +
               num(cfg.epsilon) + " omega=" + num(p.omega);
    } else if (cfg.problem == "kepler-j2") {
        if (cfg.omega)
            throw ConfigError(
                "key 'omega': the kepler-j2 frequency is derived from the "
                "orbit energy and cannot be overridden");
        KeplerState s;
        if (cfg.orbit == "geostationary")
            s = kepler_geostationary(cfg.constants);
        else if (cfg.orbit == "eccentric")
            s = kepler_eccentric(cfg.constants);
        else
            s = ks_init(cfg.q0, cfg.qdot0, 0.0, cfg.constants);
        auto f = std::make_shared<SSField>(s.eps_J2, s.omega);
        p.field = f;
        p.omega = s.omega;
        p.kepler = s;
        p.y0.resize(8);
        for (int i = 0; i < 4; ++i) {
            p.y0[static_cast<std::size_t>(i)] = s.u[static_cast<std::size_t>(i)];
            p.y0[static_cast<std::size_t>(i) + 4] =
                s.uprime[static_cast<std::size_t>(i)];
        }
        p.exp = f->exp_map();
        p.pointwise = [f](double theta, std::span<const cplx> y,
                          std::span<cplx> out) { f->pointwise(theta, y, out); };
        p.pointwise_clock = [f](double theta, std::span<const cplx> y,
                                std::span<cplx> out) {
            f->pointwise_time(theta, y, out);
        };
        p.id = "kepler-j2 orbit=" + cfg.orbit;
        if (cfg.orbit == "custom")
            p.id += " q0=(" + num(cfg.q0[0]) + "," + num(cfg.q0[1]) + "," +
                    num(cfg.q0[2]) + ") qdot0=(" + num(cfg.qdot0[0]) + "," +
                    num(cfg.qdot0[1]) + "," + num(cfg.qdot0[2]) + ")";
    } else {
        throw ConfigError("key 'problem': '" + cfg.problem +
                          "' is not one of linear-test | nls | kepler-j2");
    }
    return p;
}

//--- solve -------------------------------------------------------------------------

void cmd_solve(const RunConfig& cfg, std::ostream& log) {
    Problem p = build_problem(cfg);
    require_discretization(cfg);
    const TFConfig tfc{cfg.M, cfg.d, p.omega, p.field->dim()};
    const auto start = std::chrono::steady_clock::now();
    const TFCoefficients c =
        tf_solve(*p.field, p.y0, tfc, SolveOptions{cfg.threads, 0});
    const double wall = seconds_since(start);
    const std::string path = default_out(cfg, ".otf");
    tf_save(c, path, p.id);
    char line[256];
    std::snprintf(line, sizeof line,
                  "solve: problem=%s D=%d M=%d d=%d omega=%.6g wall=%.2fs -> %s",
                  cfg.problem.c_str(), tfc.dim, tfc.M, tfc.d, tfc.omega, wall,
                  path.c_str());
    log << line << '\n';
}

//--- eval --------------------------------------------------------------------------

void cmd_eval(const RunConfig& cfg, std::ostream& log) {
    if (cfg.coefficients.empty())
        throw ConfigError("key 'coefficients': required for eval (path of a "
                          "saved coefficient container)");
    const LoadedCoefficients loaded = tf_load(cfg.coefficients);
    const TFCoefficients& c = loaded.coeffs;
    const Problem p = build_problem(cfg);
    const int dim = p.field->dim();

    if (c.config.dim != dim)
        throw ConfigError("'" + cfg.coefficients + "' holds a " +
                          std::to_string(c.config.dim) +
                          "-component system but the configured problem has " +
                          std::to_string(dim) + " components");
    if (cfg.M != 0 && cfg.M != c.config.M)
        throw ConfigError("key 'M': config says " + std::to_string(cfg.M) +
                          " but '" + cfg.coefficients + "' holds M=" +
                          std::to_string(c.config.M));
    if (cfg.d != 0 && cfg.d != c.config.d)
        throw ConfigError("key 'd': config says " + std::to_string(cfg.d) +
                          " but '" + cfg.coefficients + "' holds d=" +
                          std::to_string(c.config.d));
    if (std::abs(c.config.omega - p.omega) >
        1e-12 * std::max(1.0, std::abs(p.omega)))
        throw ConfigError("'" + cfg.coefficients + "' was solved at omega=" +
                          num(c.config.omega) +
                          " but the configured problem has omega=" +
                          num(p.omega));

    const std::vector<double> grid = config_time_grid(cfg, p.omega);
    const std::string path = default_out(cfg, "-eval.csv");
    CsvWriter csv(path);

    std::string header = "t";
    for (int i = 1; i <= dim; ++i)
        header += ", re(y_" + std::to_string(i) + "), im(y_" +
                  std::to_string(i) + ")";
    if (cfg.problem == "nls")
        for (int i = 1; i <= dim; ++i)
            header += ", re(u_" + std::to_string(i) + "), im(u_" +
                      std::to_string(i) + ")";
    if (cfg.problem == "kepler-j2")
        header += ", q_x, q_y, q_z, qdot_x, qdot_y, qdot_z, t_phys";
    csv.header(header);

    for (const double t : grid) {
        csv.begin_row(t);
        const std::vector<cplx> y = tf_eval(c, t);
        for (const cplx v : y) csv.field(v);
        if (cfg.problem == "nls") {
            const std::vector<cplx> x = tf_eval_x(p.exp, c, t);
            for (const cplx v : x) csv.field(v);
        }
        if (cfg.problem == "kepler-j2") {
            std::array<double, 4> u{}, uprime{};
            ss_state(c, t, u, uprime);
            const std::array<double, 3> q = ks_position(u);
            const std::array<double, 3> qdot = ks_velocity(u, uprime);
            for (const double v : q) csv.field(v);
            for (const double v : qdot) csv.field(v);
            csv.field(physical_time(c, t, p.kepler->t0));
        }
        csv.end_row();
    }
    csv.close();
    log << "eval: problem=" << cfg.problem << " rows=" << csv.rows() << " -> "
        << path << '\n';
}

//--- errors ------------------------------------------------------------------------

namespace {

// The nls frequency study: each epsilon in `epsilons` means one solve of
// the scaled system (unit-height data, omega = epsilon^-2); the tabulated
// value is epsilon times the max-node difference between the approximant
// and the reference, both mapped through e^{theta A} to grid values.
void nls_epsilon_study(const RunConfig& cfg, std::ostream& log) {
    if (cfg.omega)
        throw ConfigError("key 'omega' may not be combined with 'epsilons' "
                          "(each epsilon sets omega = epsilon^-2)");
    if (cfg.J < 2)
        throw ConfigError("key 'J': required (>= 2) for problem 'nls'");
    require_discretization(cfg);

    const std::string path = default_out(cfg, "-errors.csv");
    CsvWriter csv(path);
    csv.header("t, metric, value");

    for (const double eps : cfg.epsilons) {
        const double omega = 1.0 / (eps * eps);
        const NLSField field(nls_build(cfg.J, 1.0, omega));
        const TFConfig tfc{cfg.M, cfg.d, omega, field.dim()};
        const std::vector<cplx>& y0 = field.problem().initial;
        const TFCoefficients c =
            tf_solve(field, y0, tfc, SolveOptions{cfg.threads, 0});

        const std::vector<double> grid = config_time_grid(cfg, omega);
        const PointwiseField f = [&field](double theta,
                                          std::span<const cplx> y,
                                          std::span<cplx> out) {
            field.pointwise(theta, y, out);
        };
        const ReferenceSolution ref =
            rk_solve(f, y0, omega, grid.back(), cfg.tol, grid);
        const LinearExp exp = field.exp_map();
        const std::string label = "node-max(eps=" + num(eps) + ")";

        for (std::size_t i = 0; i < ref.times.size(); ++i) {
            const double t = ref.times[i];
            const std::vector<cplx> approx = tf_eval_x(exp, c, t);
            std::vector<cplx> truth = ref.states[i];
            exp(omega * t, truth);
            double diff = 0.0;
            for (std::size_t j = 0; j < truth.size(); ++j)
                diff = std::max(diff, std::abs(approx[j] - truth[j]));
            csv.begin_row(t);
            csv.field(label);
            csv.field(eps * diff);
            csv.end_row();
        }
    }
    csv.close();
    log << "errors: problem=nls series=" << cfg.epsilons.size()
        << " rows=" << csv.rows() << " -> " << path << '\n';
}

} // namespace

void cmd_errors(const RunConfig& cfg, std::ostream& log) {
    if (!cfg.epsilons.empty()) {
        nls_epsilon_study(cfg, log);
        return;
    }
    const Problem p = build_problem(cfg);
    require_discretization(cfg);
    const std::vector<double> grid = config_time_grid(cfg, p.omega);
    const bool kepler = p.kepler.has_value();

    std::vector<std::pair<ErrorMetric, std::string>> metrics;
    const auto add = [&metrics](ErrorMetric m, const char* name) {
        metrics.emplace_back(m, name);
    };
    if (cfg.metric == "auto") {
        if (kepler) {
            add(ErrorMetric::position_relative, "position-relative");
            add(ErrorMetric::physical_time, "physical-time");
        } else {
            add(ErrorMetric::component_max, "component-max");
        }
    } else if (cfg.metric == "max") {
        add(ErrorMetric::component_max, "component-max");
    } else if (cfg.metric == "position" || cfg.metric == "time") {
        if (!kepler)
            throw ConfigError("key 'metric': '" + cfg.metric +
                              "' applies only to problem 'kepler-j2'");
        if (cfg.metric == "position")
            add(ErrorMetric::position_relative, "position-relative");
        else
            add(ErrorMetric::physical_time, "physical-time");
    } else { // all
        add(ErrorMetric::component_max, "component-max");
        if (kepler) {
            add(ErrorMetric::position_relative, "position-relative");
            add(ErrorMetric::physical_time, "physical-time");
        }
    }

    const TFConfig tfc{cfg.M, cfg.d, p.omega, p.field->dim()};
    const TFCoefficients c =
        tf_solve(*p.field, p.y0, tfc, SolveOptions{cfg.threads, 0});

    // For kepler the reference carries physical time as a ninth component
    // starting at the shared epoch t(0) = 0, usable by every metric.
    std::vector<cplx> y0ref = p.y0;
    if (kepler) y0ref.push_back(0.0);
    const ReferenceSolution ref =
        rk_solve(kepler ? p.pointwise_clock : p.pointwise, y0ref, p.omega,
                 grid.back(), cfg.tol, grid);

    const std::string path = default_out(cfg, "-errors.csv");
    CsvWriter csv(path);
    csv.header("t, metric, value");
    for (const auto& [metric, name] : metrics)
        for (const ErrorPoint& pt : error_curve(c, ref, metric)) {
            csv.begin_row(pt.t);
            csv.field(name);
            csv.field(pt.value);
            csv.end_row();
        }
    csv.close();
    log << "errors: problem=" << cfg.problem << " metrics=" << metrics.size()
        << " rows=" << csv.rows() << " -> " << path << '\n';
}

//--- averaged ----------------------------------------------------------------------

void cmd_averaged(const RunConfig& cfg, std::ostream& log) {
    if (cfg.problem == "nls")
        throw ConfigError("command 'averaged' applies to problems "
                          "'kepler-j2' and 'linear-test' only");
    const Problem p = build_problem(cfg);
    require_discretization(cfg);
    const std::vector<double> grid = config_time_grid(cfg, p.omega);
    const SolveOptions opts{cfg.threads, 0};

    const TFConfig tfc{cfg.M, cfg.d, p.omega, p.field->dim()};
    const TFCoefficients base = tf_solve(*p.field, p.y0, tfc, opts);

    double e0 = 0.0;
    if (p.kepler)
        e0 = kepler_energy(p.kepler->q, p.kepler->qdot, cfg.constants);

    const std::string path = default_out(cfg, "-averaged.csv");
    CsvWriter csv(path);
    csv.header("t, energy_error, position_diff_vs_tf");

    for (const double t : grid) {
        std::vector<cplx> composed = averaged_compose(*p.field, base, t, opts);
        std::vector<cplx> direct = tf_eval(base, t);
        double energy_error = 0.0;
        double position_diff = 0.0;
        if (p.kepler) {
            p.exp(p.omega * t, composed);
            p.exp(p.omega * t, direct);
            std::array<double, 4> u_c{}, up_c{}, u_d{}, up_d{};
            split_real_state(composed, u_c, up_c);
            split_real_state(direct, u_d, up_d);
            const std::array<double, 3> q_c = ks_position(u_c);
            const std::array<double, 3> q_d = ks_position(u_d);
            const std::array<double, 3> qd_c = ks_velocity(u_c, up_c);
            const double e = kepler_energy(q_c, qd_c, cfg.constants);
            energy_error = std::abs(e - e0) / std::abs(e0);
            double num2 = 0.0, den2 = 0.0;
            for (int i = 0; i < 3; ++i) {
                const double di = q_c[static_cast<std::size_t>(i)] -
                                  q_d[static_cast<std::size_t>(i)];
                num2 += di * di;
                den2 += q_d[static_cast<std::size_t>(i)] *
                        q_d[static_cast<std::size_t>(i)];
            }
            position_diff = std::sqrt(num2) / std::sqrt(den2);
        } else {
            for (std::size_t i = 0; i < composed.size(); ++i)
                position_diff = std::max(position_diff,
                                         std::abs(composed[i] - direct[i]));
        }
        csv.begin_row(t);
        csv.field(energy_error);
        csv.field(position_diff);
        csv.end_row();
    }
    csv.close();
    log << "averaged: problem=" << cfg.problem << " rows=" << csv.rows()
        << " -> " << path << '\n';
}

} // namespace oscifour
