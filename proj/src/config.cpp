#include "frag/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "frag/error.hpp"

namespace frag {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string unquote(const std::string& s) {
    if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') || (s.front() == '\'' && s.back() == '\'')))
        return s.substr(1, s.size() - 2);
    return s;
}

[[noreturn]] void bad(const std::string& key, const std::string& why) {
    throw Error(ErrorKind::InvalidArgument, "config key '" + key + "': " + why);
}

double to_double(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    double d = 0.0;
    try {
        d = std::stod(v, &used);
    } catch (const std::exception&) {
        bad(key, "expected a number, got '" + v + "'");
    }
    if (used != v.size() || !std::isfinite(d)) bad(key, "expected a number, got '" + v + "'");
    return d;
}

long to_int(const std::string& key, const std::string& v) {
    double d = to_double(key, v);
    if (d != std::floor(d) || std::abs(d) > 9e15) bad(key, "expected an integer, got '" + v + "'");
    return long(d);
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    bad(key, "expected true or false, got '" + v + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
    std::string s = v;
    if (!s.empty() && s.front() == '[') {
        if (s.back() != ']') bad(key, "unterminated list");
        s = s.substr(1, s.size() - 2);
    }
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) bad(key, "empty list entry");
        out.push_back(to_double(key, item));
    }
    return out;
}

}  // namespace

const char* method_name(Method m) {
    switch (m) {
    case Method::Series: return "series";
    case Method::Multiplier: return "multiplier";
    case Method::Explicit: return "explicit";
    case Method::Oracle: return "oracle";
    }
    return "?";
}

Method parse_method(const std::string& s) {
    if (s == "series") return Method::Series;
    if (s == "multiplier") return Method::Multiplier;
    if (s == "explicit") return Method::Explicit;
    if (s == "oracle") return Method::Oracle;
    throw Error(ErrorKind::InvalidArgument,
                "unknown method '" + s + "' (series, multiplier, explicit, oracle)");
}

std::vector<double> ExperimentConfig::schedule() const {
    if (!times.empty()) return times;
    std::vector<double> t;
    const long n = std::lround(t_end / t_step);
    for (long i = 0; i <= n; ++i) t.push_back(double(i) * t_step);
    return t;
}

void set_config_value(ExperimentConfig& c, const std::string& key, const std::string& raw) {
    const std::string v = unquote(trim(raw));
    if (key == "kernel") c.kernel = to_list(key, v);
    else if (key == "powers") c.powers = to_list(key, v);
    else if (key == "gamma") c.gamma = to_double(key, v);
    else if (key == "grid_xmin") c.grid.xmin = to_double(key, v);
    else if (key == "grid_xmax") { c.grid.xmax = to_double(key, v); c.grid_xmax_set = true; }
    else if (key == "grid_points") {
        long n = to_int(key, v);
        if (n < 16) bad(key, "need at least 16 points");
        c.grid.points = std::size_t(n);
    }
    else if (key == "method") {
        try {
            c.method = parse_method(v);
        } catch (const Error& e) {
            bad(key, e.what());
        }
    }
    else if (key == "initial") {
        if (v == "eigenmode") c.initial = InitialKind::Eigenmode;
        else if (v == "bump") c.initial = InitialKind::Bump;
        else if (v == "powerlaw") c.initial = InitialKind::PowerLaw;
        else if (v == "file") c.initial = InitialKind::File;
        else bad(key, "expected eigenmode, bump, powerlaw or file, got '" + v + "'");
    }
    else if (key == "modes") c.modes = to_list(key, v);
    else if (key == "bump_power") c.bump_power = to_double(key, v);
    else if (key == "bump_rate") c.bump_rate = to_double(key, v);
    else if (key == "bump_transfer") c.bump_transfer = to_bool(key, v);
    else if (key == "powerlaw_beta") c.powerlaw_beta = to_double(key, v);
    else if (key == "initial_file") c.initial_file = v;
    else if (key == "initial_variable") {
        if (v == "original") c.initial_transformed = false;
        else if (v == "transformed") c.initial_transformed = true;
        else bad(key, "expected original or transformed");
    }
    else if (key == "times") c.times = to_list(key, v);
    else if (key == "t_end") c.t_end = to_double(key, v);
    else if (key == "t_step") c.t_step = to_double(key, v);
    else if (key == "fit_t0") c.fit_t0 = to_double(key, v);
    else if (key == "fit_t1") c.fit_t1 = to_double(key, v);
    else if (key == "n_max") c.n_max = int(to_int(key, v));
    else if (key == "project_mass") c.project_mass = to_bool(key, v);
    else if (key == "transformed") c.transformed = to_bool(key, v);
    else if (key == "out") c.out = v;
    else if (key == "seed") {
        long s = to_int(key, v);
        if (s < 0) bad(key, "seed must be nonnegative");
        c.seed = std::uint64_t(s);
    }
    else throw Error(ErrorKind::InvalidArgument, "unknown config key '" + key + "'");
}

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig c;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        // '#' starts a comment unless quoted
        bool q = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') q = !q;
            if (line[i] == '#' && !q) {
                line.resize(i);
                break;
            }
        }
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorKind::InvalidArgument,
                        "config line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        try {
            set_config_value(c, key, line.substr(eq + 1));
        } catch (const Error& e) {
            throw Error(ErrorKind::InvalidArgument,
                        "config line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::InvalidArgument, "cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void validate_config(const ExperimentConfig& c) {
    if (c.kernel.empty()) bad("kernel", "empty");
    if (!c.powers.empty() && c.powers.size() != c.kernel.size())
        bad("powers", "needs one entry per kernel coefficient");
    if (!(c.gamma > 0.0)) bad("gamma", "must be positive");
    if (!(c.grid.xmin > 0.0 && c.grid.xmax > c.grid.xmin)) bad("grid_xmin", "need 0 < grid_xmin < grid_xmax");
    if (!(c.t_step > 0.0) && c.times.empty()) bad("t_step", "must be positive");
    if (c.t_end < 0.0) bad("t_end", "must be nonnegative");
    for (std::size_t i = 0; i < c.times.size(); ++i) {
        if (c.times[i] < 0.0) bad("times", "negative time");
        if (i > 0 && !(c.times[i] > c.times[i - 1])) bad("times", "must be strictly increasing");
    }
    if (!(c.fit_t1 > c.fit_t0)) bad("fit_t1", "must exceed fit_t0");
    if (c.n_max < 1) bad("n_max", "must be at least 1");
    if (c.initial == InitialKind::Eigenmode && c.modes.empty()) bad("modes", "empty");
    if (c.initial == InitialKind::File && c.initial_file.empty()) bad("initial_file", "required for initial = file");
    if (c.initial == InitialKind::Bump && !(c.bump_rate > 0.0)) bad("bump_rate", "must be positive");
    if (c.initial == InitialKind::PowerLaw && !(c.powerlaw_beta >= 0.0)) bad("powerlaw_beta", "must be nonnegative");
}

}  // namespace frag
