//============================================================================
// config.cpp
//
// Flat key = value parser behind RunConfig.  Collection happens in two
// stages: first every source line (file, then overrides) is trimmed, split
// at the first '=', and checked against the full key vocabulary; then the
// merged map is interpreted against the selected problem, so a key that
// belongs to a different problem family is rejected with its origin.  All
// numeric parsing goes through std::from_chars and insists on consuming
// the whole token, so trailing garbage ("M = 8x") is caught.
//============================================================================
#include "oscifour/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string_view>

#include "oscifour/errors.hpp"

namespace oscifour {
namespace {

constexpr double kPi = 3.14159265358979323846;

// Where a value came from, for error messages ("run.cfg:12", "override").
struct Source {
    std::string value;
    std::string where;
};
using Entries = std::map<std::string, Source>;

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

// key -> family ("" = common to every problem).
const std::map<std::string, std::string>& key_families() {
    static const std::map<std::string, std::string> families = {
        {"problem", ""},      {"M", ""},
        {"d", ""},            {"omega", ""},
        {"t_start", ""},      {"t_end", ""},
        {"revolutions", ""},  {"t_count", ""},
        {"times", ""},        {"tol", ""},
        {"metric", ""},       {"threads", ""},
        {"out", ""},          {"coefficients", ""},
        {"amplitude_re", "linear-test"},
        {"amplitude_im", "linear-test"},
        {"mode", "linear-test"},
        {"y0_re", "linear-test"},
        {"y0_im", "linear-test"},
        {"J", "nls"},
        {"epsilon", "nls"},
        {"epsilons", "nls"},
        {"orbit", "kepler-j2"},
        {"q0_x", "kepler-j2"},
        {"q0_y", "kepler-j2"},
        {"q0_z", "kepler-j2"},
        {"qdot0_x", "kepler-j2"},
        {"qdot0_y", "kepler-j2"},
        {"qdot0_z", "kepler-j2"},
        {"mu", "kepler-j2"},
        {"j2", "kepler-j2"},
        {"re", "kepler-j2"},
    };
    return families;
}

[[noreturn]] void fail(const std::string& where, const std::string& msg) {
    throw ConfigError(where + ": " + msg);
}

// Split "key = value", validate the key, and store it.  `where` identifies
// the source line; duplicates within one file are rejected outright.
void collect(Entries& entries, std::string_view line, const std::string& where,
             bool allow_replace) {
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
        fail(where, "expected `key = value`, found no '='");
    const std::string key{trim(line.substr(0, eq))};
    const std::string value{trim(line.substr(eq + 1))};
    if (key.empty()) fail(where, "empty key before '='");
    if (value.empty()) fail(where, "key '" + key + "': empty value");
    if (key_families().find(key) == key_families().end())
        fail(where, "unknown key '" + key + "'");
    const auto [it, inserted] = entries.insert_or_assign(key, Source{value, where});
    (void)it;
    if (!inserted && !allow_replace)
        fail(where, "key '" + key + "' already set earlier in the same file");
}

double parse_double(const std::string& key, const Source& s) {
    const std::string_view v = s.value;
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size())
        fail(s.where, "key '" + key + "': '" + s.value + "' is not a number");
    if (!std::isfinite(out))
        fail(s.where, "key '" + key + "': value must be finite");
    return out;
}

long parse_int(const std::string& key, const Source& s) {
    const std::string_view v = s.value;
    long out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size())
        fail(s.where, "key '" + key + "': '" + s.value + "' is not an integer");
    return out;
}

std::vector<double> parse_list(const std::string& key, const Source& s) {
    std::vector<double> out;
    std::string_view rest = s.value;
    while (true) {
        const auto comma = rest.find(',');
        const std::string_view tok = trim(rest.substr(0, comma));
        if (tok.empty())
            fail(s.where, "key '" + key + "': empty element in list");
        Source elem{std::string(tok), s.where};
        out.push_back(parse_double(key, elem));
        if (comma == std::string_view::npos) break;
        rest = rest.substr(comma + 1);
    }
    return out;
}

// Typed readers with range checks; each returns false when the key is absent.
struct Reader {
    const Entries& entries;

    const Source* find(const std::string& key) const {
        const auto it = entries.find(key);
        return it == entries.end() ? nullptr : &it->second;
    }
    bool integer(const std::string& key, int& dst, long lo, long hi) const {
        const Source* s = find(key);
        if (!s) return false;
        const long v = parse_int(key, *s);
        if (v < lo || v > hi)
            fail(s->where, "key '" + key + "': " + std::to_string(v) +
                               " is out of range [" + std::to_string(lo) + ", " +
                               std::to_string(hi) + "]");
        dst = static_cast<int>(v);
        return true;
    }
    bool real(const std::string& key, double& dst, bool positive,
              bool nonnegative = false) const {
        const Source* s = find(key);
        if (!s) return false;
        const double v = parse_double(key, *s);
        if (positive && !(v > 0.0))
            fail(s->where, "key '" + key + "': value must be positive");
        if (nonnegative && v < 0.0)
            fail(s->where, "key '" + key + "': value must be nonnegative");
        dst = v;
        return true;
    }
    bool text(const std::string& key, std::string& dst) const {
        const Source* s = find(key);
        if (!s) return false;
        dst = s->value;
        return true;
    }
};

RunConfig interpret(const Entries& entries) {
    RunConfig cfg;
    const Reader read{entries};

    const Source* prob = read.find("problem");
    if (!prob)
        throw ConfigError("key 'problem': required (linear-test | nls | kepler-j2)");
    cfg.problem = prob->value;
    if (cfg.problem != "linear-test" && cfg.problem != "nls" &&
        cfg.problem != "kepler-j2")
        fail(prob->where, "key 'problem': '" + cfg.problem +
                              "' is not one of linear-test | nls | kepler-j2");

    // Keys from a different problem family are configuration mistakes.
    for (const auto& [key, src] : entries) {
        const std::string& family = key_families().at(key);
        if (!family.empty() && family != cfg.problem)
            fail(src.where, "key '" + key + "' does not apply to problem '" +
                                cfg.problem + "'");
    }

    // linear-test
    double re = 0.0, im = 0.0;
    if (read.real("amplitude_re", re, false)) cfg.amplitude.real(re);
    if (read.real("amplitude_im", im, false)) cfg.amplitude.imag(im);
    read.integer("mode", cfg.mode, -1000000, 1000000);
    if (read.real("y0_re", re, false)) cfg.y0.real(re);
    if (read.real("y0_im", im, false)) cfg.y0.imag(im);

    // nls
    read.integer("J", cfg.J, 2, 1 << 20);
    read.real("epsilon", cfg.epsilon, true);
    if (const Source* s = read.find("epsilons")) {
        cfg.epsilons = parse_list("epsilons", *s);
        for (double e : cfg.epsilons)
            if (!(e > 0.0))
                fail(s->where, "key 'epsilons': every value must be positive");
    }

    // kepler-j2
    if (read.text("orbit", cfg.orbit) && cfg.orbit != "geostationary" &&
        cfg.orbit != "eccentric" && cfg.orbit != "custom")
        fail(read.find("orbit")->where,
             "key 'orbit': '" + cfg.orbit +
                 "' is not one of geostationary | eccentric | custom");
    const char* state_keys[6] = {"q0_x", "q0_y", "q0_z",
                                 "qdot0_x", "qdot0_y", "qdot0_z"};
    double* state_dsts[6] = {&cfg.q0[0], &cfg.q0[1], &cfg.q0[2],
                             &cfg.qdot0[0], &cfg.qdot0[1], &cfg.qdot0[2]};
    for (int i = 0; i < 6; ++i) {
        const bool given = read.real(state_keys[i], *state_dsts[i], false);
        if (given && cfg.orbit != "custom")
            fail(read.find(state_keys[i])->where,
                 std::string("key '") + state_keys[i] +
                     "' only applies to orbit = custom");
        if (!given && cfg.problem == "kepler-j2" && cfg.orbit == "custom")
            throw ConfigError(std::string("key '") + state_keys[i] +
                              "': required when orbit = custom");
    }
    read.real("mu", cfg.constants.mu, true);
    read.real("j2", cfg.constants.J2, false, true);
    read.real("re", cfg.constants.Re, true);

    // discretization
    read.integer("M", cfg.M, 1, 1 << 16);
    read.integer("d", cfg.d, 1, 256);
    double omega = 0.0;
    if (read.real("omega", omega, true)) cfg.omega = omega;

    // time grid
    read.real("t_start", cfg.t_start, false, true);
    double t_end = 0.0;
    if (read.real("t_end", t_end, false, true)) cfg.t_end = t_end;
    double revs = 0.0;
    if (read.real("revolutions", revs, true)) cfg.revolutions = revs;
    if (cfg.t_end && cfg.revolutions)
        fail(read.find("revolutions")->where,
             "keys 't_end' and 'revolutions' are mutually exclusive");
    read.integer("t_count", cfg.t_count, 1, 1 << 24);
    if (const Source* s = read.find("times")) {
        for (const char* other : {"t_start", "t_end", "revolutions", "t_count"})
            if (read.find(other))
                fail(s->where, std::string("key 'times' may not be combined "
                                           "with key '") + other + "'");
        cfg.times = parse_list("times", *s);
        for (double t : cfg.times)
            if (t < 0.0)
                fail(s->where, "key 'times': every value must be nonnegative");
    }

    // oracle, execution, paths
    read.real("tol", cfg.tol, true);
    if (read.text("metric", cfg.metric) && cfg.metric != "auto" &&
        cfg.metric != "max" && cfg.metric != "position" &&
        cfg.metric != "time" && cfg.metric != "all")
        fail(read.find("metric")->where,
             "key 'metric': '" + cfg.metric +
                 "' is not one of auto | max | position | time | all");
    read.integer("threads", cfg.threads, 1, 4096);
    read.text("out", cfg.out);
    read.text("coefficients", cfg.coefficients);

    return cfg;
}

RunConfig parse_entries(std::istream& in, const std::string& origin,
                        std::span<const std::string> overrides) {
    Entries entries;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string_view body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        collect(entries, body, origin + ":" + std::to_string(lineno),
                /*allow_replace=*/false);
    }
    for (const std::string& ov : overrides)
        collect(entries, trim(ov), "override '" + ov + "'",
                /*allow_replace=*/true);
    return interpret(entries);
}

} // namespace

RunConfig parse_config(const std::string& path,
                       std::span<const std::string> overrides) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open config file '" + path + "'");
    return parse_entries(in, path, overrides);
}

RunConfig parse_config_text(const std::string& text, const std::string& origin,
                            std::span<const std::string> overrides) {
    std::istringstream in(text);
    return parse_entries(in, origin, overrides);
}

std::vector<double> config_time_grid(const RunConfig& cfg, double omega) {
    if (!cfg.times.empty()) {
        std::vector<double> grid = cfg.times;
        std::sort(grid.begin(), grid.end());
        grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
        return grid;
    }
    if (!cfg.t_end && !cfg.revolutions)
        throw ConfigError("no time grid: set `times`, `t_end`, or `revolutions`");
    const double t_end =
        cfg.t_end ? *cfg.t_end : *cfg.revolutions * (2.0 * kPi / omega);
    if (cfg.t_start > t_end)
        throw ConfigError("key 't_start': " + std::to_string(cfg.t_start) +
                          " lies beyond the end of the time span");
    if (cfg.t_count == 1) return {t_end};
    std::vector<double> grid(static_cast<std::size_t>(cfg.t_count));
    const double step = (t_end - cfg.t_start) / (cfg.t_count - 1);
    for (int i = 0; i < cfg.t_count; ++i) grid[static_cast<std::size_t>(i)] = cfg.t_start + step * i;
    grid.back() = t_end;
    return grid;
}

} // namespace oscifour
