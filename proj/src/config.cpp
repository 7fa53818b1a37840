// config.cpp: INI-style run configuration parser

#include "spinbath/config.hpp"

#include "spinbath/errors.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace spinbath {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double to_double(std::string_view s) {
    const std::string str(trim(s));
    if (str.empty()) {
        throw ConfigError("expected a number");
    }
    char* end = nullptr;
    const double v = std::strtod(str.c_str(), &end);
    if (end != str.c_str() + str.size() || !std::isfinite(v)) {
        throw ConfigError("'" + str + "' is not a finite number");
    }
    return v;
}

long long to_integer(std::string_view s) {
    const std::string str(trim(s));
    char* end = nullptr;
    errno = 0;
    const long long v = std::strtoll(str.c_str(), &end, 10);
    if (str.empty() || end != str.c_str() + str.size() || errno != 0) {
        throw ConfigError("'" + str + "' is not an integer");
    }
    return v;
}

std::uint64_t to_u64(std::string_view s) {
    const std::string str(trim(s));
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(str.c_str(), &end, 0);
    if (str.empty() || str[0] == '-' || end != str.c_str() + str.size() || errno != 0) {
        throw ConfigError("'" + str + "' is not an unsigned 64-bit integer");
    }
    return v;
}

bool to_bool(std::string_view s) {
    const std::string v(trim(s));
    if (v == "true" || v == "on" || v == "yes" || v == "1") {
        return true;
    }
    if (v == "false" || v == "off" || v == "no" || v == "0") {
        return false;
    }
    throw ConfigError("'" + v + "' is not a boolean");
}

BoundsMode to_bounds_mode(std::string_view s) {
    if (s == "gershgorin") {
        return BoundsMode::gershgorin;
    }
    if (s == "lanczos") {
        return BoundsMode::lanczos;
    }
    throw ConfigError("unknown bounds mode '" + std::string(s) + "' (gershgorin or lanczos)");
}

std::vector<std::string> to_list(std::string_view s) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        const auto comma = s.find(',', pos);
        const auto item = trim(s.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
        if (!item.empty()) {
            out.emplace_back(item);
        }
        if (comma == std::string_view::npos) {
            break;
        }
        pos = comma + 1;
    }
    return out;
}

struct Entry {
    std::string value;
    int line = 0;
};

using Section = std::map<std::string, Entry>;

const std::map<std::string, std::set<std::string>>& schema() {
    static const std::map<std::string, std::set<std::string>> s{
        {"system", {"topology", "family", "J", "n_S", "initial_state"}},
        {"environment", {"topology", "family", "Omega", "n", "initial_state"}},
        {"interaction", {"family", "Delta"}},
        {"run",
         {"tau", "n_steps", "seed", "metrics", "output", "ldos", "fit", "floor", "degeneracy_tol",
          "truncation_tol", "near_ud_epsilon", "near_ground_epsilon", "max_spins", "checkpoint_every",
          "bounds"}},
    };
    return s;
}

} // namespace

bool RunSettings::wants(std::string_view metric) const {
    return std::find(metrics.begin(), metrics.end(), metric) != metrics.end();
}

const std::vector<std::string>& known_metrics() {
    static const std::vector<std::string> m{"sigma", "gamma", "delta", "b", "S_quad",
                                            "echo", "E_S", "rho", "correlators"};
    return m;
}

double parse_time_expression(std::string_view s) {
    const std::string_view expr = trim(s);
    if (expr.empty()) {
        throw ConfigError("empty time expression");
    }
    double value = 1.0;
    char op = '*';
    std::size_t pos = 0;
    while (pos <= expr.size()) {
        const auto next = expr.find_first_of("*/", pos);
        const auto tok = trim(expr.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
        const double v = (tok == "pi") ? std::numbers::pi : to_double(tok);
        if (op == '*') {
            value *= v;
        } else {
            if (v == 0.0) {
                throw ConfigError("division by zero in time expression");
            }
            value /= v;
        }
        if (next == std::string_view::npos) {
            break;
        }
        op = expr[next];
        pos = next + 1;
    }
    return value;
}

RunConfig parse_config(std::string_view text, const std::string& source) {
    std::map<std::string, Section> sections;
    std::string current;
    int line_no = 0;
    std::size_t pos = 0;
    auto fail = [&](int line, const std::string& msg) -> ConfigError {
        return ConfigError(source + ":" + std::to_string(line) + ": " + msg);
    };
    while (pos < text.size()) {
        const auto eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() : eol + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw fail(line_no, "malformed section header");
            }
            current = std::string(trim(line.substr(1, line.size() - 2)));
            if (!schema().count(current)) {
                throw fail(line_no, "unknown section [" + current + "]");
            }
            if (sections.count(current)) {
                throw fail(line_no, "section [" + current + "] appears twice");
            }
            sections[current];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw fail(line_no, "expected 'key = value'");
        }
        if (current.empty()) {
            throw fail(line_no, "key outside of any section");
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (!schema().at(current).count(key)) {
            throw fail(line_no, "unknown key '" + key + "' in [" + current + "]");
        }
        if (value.empty()) {
            throw fail(line_no, "empty value for '" + key + "'");
        }
        if (!sections[current].emplace(key, Entry{value, line_no}).second) {
            throw fail(line_no, "duplicate key '" + key + "' in [" + current + "]");
        }
    }

    auto section = [&](const std::string& name) -> const Section& {
        const auto it = sections.find(name);
        if (it == sections.end()) {
            throw ConfigError(source + ": missing section [" + name + "]");
        }
        return it->second;
    };
    auto required = [&](const Section& sec, const std::string& sname, const std::string& key) -> const Entry& {
        const auto it = sec.find(key);
        if (it == sec.end()) {
            throw ConfigError(source + ": missing key '" + key + "' in [" + sname + "]");
        }
        return it->second;
    };
    // Converts with a line-precise error message.
    auto convert = [&](const Entry& e, const std::string& key, auto fn) {
        try {
            return fn(e.value);
        } catch (const ConfigError& err) {
            throw fail(e.line, key + ": " + err.what());
        }
    };
    auto to_int = [](const std::string& v) { return static_cast<int>(to_integer(v)); };
    auto to_double_str = [](const std::string& v) { return to_double(v); };

    RunConfig cfg;
    auto subsystem = [&](const std::string& name, const std::string& scale_key, const std::string& n_key) {
        const Section& sec = section(name);
        SubsystemConfig s;
        s.topology = convert(required(sec, name, "topology"), "topology",
                             [](const std::string& v) { return parse_topology(v); });
        s.family = convert(required(sec, name, "family"), "family",
                           [](const std::string& v) { return parse_family(v); });
        s.scale = convert(required(sec, name, scale_key), scale_key, to_double_str);
        s.n = convert(required(sec, name, n_key), n_key, to_int);
        s.initial_state = convert(required(sec, name, "initial_state"), "initial_state",
                                  [](const std::string& v) { return parse_state_kind(v); });
        return s;
    };
    cfg.system = subsystem("system", "J", "n_S");
    cfg.environment = subsystem("environment", "Omega", "n");
    {
        const Section& sec = section("interaction");
        cfg.interaction_family = convert(required(sec, "interaction", "family"), "family",
                                         [](const std::string& v) { return parse_family(v); });
        cfg.delta = convert(required(sec, "interaction", "Delta"), "Delta", to_double_str);
    }

    RunSettings& r = cfg.run;
    r.tau = std::numbers::pi / 10.0;
    r.metrics = known_metrics();
    if (sections.count("run")) {
        const Section& sec = sections.at("run");
        auto opt = [&](const std::string& key, auto fn, auto& target) {
            if (const auto it = sec.find(key); it != sec.end()) {
                target = convert(it->second, key, fn);
            }
        };
        opt("tau", [](const std::string& v) { return parse_time_expression(v); }, r.tau);
        opt("n_steps", to_int, r.n_steps);
        opt("seed", [](const std::string& v) { return to_u64(v); }, r.seed);
        opt("metrics", [](const std::string& v) { return to_list(v); }, r.metrics);
        opt("output", [](const std::string& v) { return v; }, r.output);
        opt("ldos", [](const std::string& v) { return to_bool(v); }, r.ldos);
        opt("fit", [](const std::string& v) { return to_bool(v); }, r.fit);
        opt("floor", to_double_str, r.floor);
        opt("degeneracy_tol", to_double_str, r.degeneracy_tol);
        opt("truncation_tol", to_double_str, r.truncation_tol);
        opt("near_ud_epsilon", to_double_str, r.near_ud_epsilon);
        opt("near_ground_epsilon", to_double_str, r.near_ground_epsilon);
        opt("max_spins", to_int, r.max_spins);
        opt("checkpoint_every", to_int, r.checkpoint_every);
        opt("bounds", [](const std::string& v) { return to_bounds_mode(v); }, r.bounds);
        if (const auto it = sec.find("metrics"); it != sec.end()) {
            for (const auto& m : r.metrics) {
                if (std::find(known_metrics().begin(), known_metrics().end(), m) == known_metrics().end()) {
                    throw fail(it->second.line, "unknown metric '" + m + "'");
                }
            }
        }
    }
    validate_config(cfg);
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open configuration file " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.string());
}

void validate_config(const RunConfig& c) {
    if (c.system.n < 1) {
        throw ConfigError("n_S must be at least 1");
    }
    if (c.environment.n < 0) {
        throw ConfigError("n must be non-negative");
    }
    if (c.system.n > 8) {
        throw BudgetError("system registers are limited to 8 spins (dense eigenbasis)");
    }
    if (c.run.max_spins < 1 || c.run.max_spins > 40) {
        throw ConfigError("max_spins must lie in [1, 40]");
    }
    if (c.n_total() > c.run.max_spins) {
        throw BudgetError(std::to_string(c.n_total()) + " spins exceed the ceiling of " +
                          std::to_string(c.run.max_spins));
    }
    if (!(c.run.tau > 0.0) || !std::isfinite(c.run.tau)) {
        throw ConfigError("tau must be positive");
    }
    if (c.run.n_steps < 0) {
        throw ConfigError("n_steps must be non-negative");
    }
    if (!(c.run.floor >= 0.0)) {
        throw ConfigError("floor must be non-negative");
    }
    if (!(c.run.degeneracy_tol >= 0.0)) {
        throw ConfigError("degeneracy_tol must be non-negative");
    }
    if (!(c.run.truncation_tol > 0.0 && c.run.truncation_tol < 1.0)) {
        throw ConfigError("truncation_tol must lie in (0, 1)");
    }
    if (!(c.run.near_ud_epsilon > 0.0 && c.run.near_ud_epsilon <= 0.5)) {
        throw ConfigError("near_ud_epsilon must lie in (0, 0.5]");
    }
    if (!(c.run.near_ground_epsilon > 0.0 && c.run.near_ground_epsilon < 1.0)) {
        throw ConfigError("near_ground_epsilon must lie in (0, 1)");
    }
    if (c.run.checkpoint_every < 1) {
        throw ConfigError("checkpoint_every must be at least 1");
    }
    if (c.run.output.empty()) {
        throw ConfigError("output must not be empty");
    }
    for (const auto* s : {&c.system, &c.environment}) {
        if (s->n > 0) {
            (void)build_topology(s->topology, s->n); // shape check
        }
    }
}

std::string to_text(const RunConfig& c) {
    std::ostringstream o;
    auto sub = [&](const char* name, const SubsystemConfig& s, const char* scale, const char* n) {
        o << '[' << name << "]\n"
          << "topology = " << to_string(s.topology) << '\n'
          << "family = " << to_string(s.family) << '\n'
          << scale << " = " << fmt_double(s.scale) << '\n'
          << n << " = " << s.n << '\n'
          << "initial_state = " << to_string(s.initial_state) << "\n\n";
    };
    sub("system", c.system, "J", "n_S");
    sub("environment", c.environment, "Omega", "n");
    o << "[interaction]\nfamily = " << to_string(c.interaction_family) << "\nDelta = " << fmt_double(c.delta)
      << "\n\n[run]\n"
      << "tau = " << fmt_double(c.run.tau) << '\n'
      << "n_steps = " << c.run.n_steps << '\n'
      << "seed = " << c.run.seed << '\n'
      << "metrics = ";
    for (std::size_t k = 0; k < c.run.metrics.size(); ++k) {
        o << (k ? ", " : "") << c.run.metrics[k];
    }
    o << '\n'
      << "output = " << c.run.output << '\n'
      << "ldos = " << (c.run.ldos ? "true" : "false") << '\n'
      << "fit = " << (c.run.fit ? "true" : "false") << '\n'
      << "floor = " << fmt_double(c.run.floor) << '\n'
      << "degeneracy_tol = " << fmt_double(c.run.degeneracy_tol) << '\n'
      << "truncation_tol = " << fmt_double(c.run.truncation_tol) << '\n'
      << "near_ud_epsilon = " << fmt_double(c.run.near_ud_epsilon) << '\n'
      << "near_ground_epsilon = " << fmt_double(c.run.near_ground_epsilon) << '\n'
      << "max_spins = " << c.run.max_spins << '\n'
      << "checkpoint_every = " << c.run.checkpoint_every << '\n'
      << "bounds = " << (c.run.bounds == BoundsMode::lanczos ? "lanczos" : "gershgorin") << '\n';
    return o.str();
}

HamiltonianSpec build_spec(const RunConfig& c) {
    validate_config(c);
    SubsystemModel sys{build_topology(c.system.topology, c.system.n), {c.system.family, c.system.scale}};
    SubsystemModel env{c.environment.n > 0 ? build_topology(c.environment.topology, c.environment.n)
                                           : Topology{TopologyKind::none, 0, {}},
                       {c.environment.family, c.environment.scale}};
    return assemble(sys, env, {c.interaction_family, c.delta}, c.run.seed);
}

} // namespace spinbath
