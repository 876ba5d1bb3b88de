// fragtool: self-similar profiles, perturbation evolution, spectra and the
// validation battery from one flat config file.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "frag/config.hpp"
#include "frag/error.hpp"
#include "frag/evolution.hpp"
#include "frag/explicit.hpp"
#include "frag/kernel.hpp"
#include "frag/mellin.hpp"
#include "frag/oracle.hpp"
#include "frag/selfsimilar.hpp"
#include "frag/validate.hpp"

namespace fs = std::filesystem;
using namespace frag;

namespace {

enum Exit { Ok = 0, ValidationFailed = 1, ConfigError = 2, NumericalFailure = 3, Precondition = 4 };

// config problems found after parsing (bad kernel, unsupported method combination)
struct ConfigFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_atomic(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path().empty() ? fs::path(".") : path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        if (!out.flush()) throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::string variable_comment(const ExperimentConfig& c) {
    if (c.transformed) return "# variable=transformed (x is the internal variable, original size^gamma), gamma=" + num(c.gamma) + "\n";
    return "# variable=original (x = transformed^(1/gamma)), gamma=" + num(c.gamma) + "\n";
}

double out_x(const ExperimentConfig& c, double x) { return c.transformed ? x : std::pow(x, 1.0 / c.gamma); }

std::string function_csv(const ExperimentConfig& c, const GridFunction& f, const std::string& column) {
    std::string s = variable_comment(c) + "x," + column + "\n";
    for (std::size_t i = 0; i < f.size(); ++i) s += num(out_x(c, f.xs[i])) + "," + num(f.values[i]) + "\n";
    return s;
}

std::string summary_csv(const std::vector<std::pair<std::string, std::string>>& rows) {
    std::string s = "key,value\n";
    for (const auto& [k, v] : rows) s += k + "," + v + "\n";
    return s;
}

DaughterPolynomial config_kernel(const ExperimentConfig& c) {
    try {
        return c.powers.empty() ? validate_daughter(c.kernel) : validate_daughter(c.kernel, c.powers);
    } catch (const Error& e) {
        throw ConfigFailure(std::string("kernel: ") + e.what());
    }
}

GridFunction config_grid(const ExperimentConfig& c) {
    GridSpec g = c.grid;
    // power-law data needs a long right tail
    if (!c.grid_xmax_set && c.initial == InitialKind::PowerLaw) g.xmax = 1e6;
    return make_log_grid(g);
}

bool is_monomial(const DaughterPolynomial& p) {
    int nz = 0;
    for (double a : p.coeffs) nz += a != 0.0;
    return nz == 1;
}

GridFunction read_initial_file(const ExperimentConfig& c, const GridFunction& g) {
    std::ifstream in(c.initial_file);
    if (!in) throw ConfigFailure("initial_file: cannot read '" + c.initial_file + "'");
    std::vector<double> lx, v;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        std::string a, b;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',')) continue;
        char* e1 = nullptr;
        char* e2 = nullptr;
        double x = std::strtod(a.c_str(), &e1), u = std::strtod(b.c_str(), &e2);
        if (e1 == a.c_str() || e2 == b.c_str()) continue;  // header row
        if (!(x > 0.0)) throw ConfigFailure("initial_file: abscissae must be positive");
        double xt = c.initial_transformed ? x : std::pow(x, c.gamma);
        if (!lx.empty() && !(std::log(xt) > lx.back())) throw ConfigFailure("initial_file: abscissae must increase");
        lx.push_back(std::log(xt));
        v.push_back(u);
    }
    if (lx.size() < 2) throw ConfigFailure("initial_file: fewer than two data rows");
    // linear in log x, zero outside the sampled range
    return sample_on(g, [&](double x) {
        double y = std::log(x);
        if (y < lx.front() || y > lx.back()) return 0.0;
        auto it = std::upper_bound(lx.begin(), lx.end(), y);
        if (it == lx.end()) return v.back();
        std::size_t j = std::size_t(it - lx.begin());
        double w = (y - lx[j - 1]) / (lx[j] - lx[j - 1]);
        return (1 - w) * v[j - 1] + w * v[j];
    });
}

GridFunction build_initial(const ExperimentConfig& c, const DaughterPolynomial& p, const GridFunction& g) {
    switch (c.initial) {
    case InitialKind::Eigenmode: {
        GridFunction u = g.zeros_like();
        for (std::size_t n = 1; n <= c.modes.size(); ++n)
            if (c.modes[n - 1] != 0.0) u = axpy(c.modes[n - 1], eigenfunction_grid(int(n), c.gamma, p.q, g), u);
        return u;
    }
    case InitialKind::Bump: {
        // x^a e^{-bx} - c x^{a+1} e^{-bx} with c fixing the first moment at zero
        const double k = 2.0 / c.gamma, a = c.bump_power, b = c.bump_rate;
        const double cc = b / (k + a);
        auto v = sample_on(g, [&](double x) { return std::pow(x, a) * (1.0 - cc * x) * std::exp(-b * x); });
        if (!c.bump_transfer) return v;
        // a generic bump has x^{-z_i} terms after the transfer, which the series cannot carry
        auto fact = factor_kernel(p, c.gamma);
        InverseOptions io;
        io.saddle = true;
        return apply_multiplier([&](cplx z) { return 1.0 / transfer_multiplier(fact, z); }, v, 0.5, io);
    }
    case InitialKind::PowerLaw:
        return representation_grid(AnalyticSeed::zero_mass(c.gamma, c.powerlaw_beta), g, 0.0);
    case InitialKind::File:
        return read_initial_file(c, g);
    }
    return g.zeros_like();
}

// ---------------------------------------------------------------- commands

int cmd_selfsimilar(const ExperimentConfig& c) {
    auto p = config_kernel(c);
    auto g = config_grid(c);
    auto fact = factor_kernel(p, c.gamma);
    auto prof = selfsimilar_profile(fact, g);
    std::vector<std::pair<std::string, std::string>> rows = {
        {"gamma", num(c.gamma)},
        {"nu", num(fact.nu)},
        {"assumption_holds", fact.assumption_holds ? "true" : "false"},
        {"tail_exponent_fit", prof.tail_fitted ? num(prof.tail_exponent_fit) : "nan"},
        {"tail_exponent_expected", num((p.at_one() - 2.0) / c.gamma)},
        {"mass", num(first_moment(prof.profile, c.gamma))},
    };
    try {
        // residue of the raw transform (the closed-form normalization) and the unit-mass value
        rows.push_back({"u_s_zero", num(value_at_zero(fact, false))});
        rows.push_back({"u_s_zero_unit_mass", num(value_at_zero(fact, true))});
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::PoleHit) throw;
        rows.push_back({"u_s_zero", "pole"});
    }
    for (std::size_t i = 0; i < fact.roots.size(); ++i)
        rows.push_back({"root_" + std::to_string(i + 1), num(fact.roots[i].real()) + (fact.roots[i].imag() >= 0 ? "+" : "") +
                                                              num(fact.roots[i].imag()) + "i"});
    fs::path out(c.out);
    write_atomic(out / "profile.csv", function_csv(c, prof.profile, "u_s"));
    write_atomic(out / "summary.csv", summary_csv(rows));
    return Ok;
}

int cmd_evolve(const ExperimentConfig& c) {
    auto p = config_kernel(c);
    auto g = config_grid(c);
    auto fact = factor_kernel(p, c.gamma);
    auto times = c.schedule();

    if (c.method == Method::Series && !is_monomial(p))
        throw ConfigFailure("method series needs p(s) = (q+2) s^q; use multiplier or oracle for this kernel");
    if ((c.method == Method::Explicit || c.initial == InitialKind::PowerLaw) &&
        !(p.coeffs.size() == 1 && p.q == 0))
        throw ConfigFailure("the explicit representation and power-law data are for p(s) = 2 only");

    GridFunction u0 = build_initial(c, p, g);
    double rm = relative_mass(u0, c.gamma);
    std::vector<std::pair<std::string, std::string>> rows = {
        {"method", method_name(c.method)},
        {"gamma", num(c.gamma)},
        {"nu", num(fact.nu)},
        {"initial_relative_mass", num(rm)},
    };
    if (rm > 1e-6) {
        if (!c.project_mass)
            throw Error(ErrorKind::NotZeroMass, "initial data has relative mass " + num(rm) +
                                                    " (pass --project-mass to subtract m u_S)");
        auto prof = selfsimilar_profile(fact, g);
        u0 = axpy(-first_moment(u0, c.gamma), prof.profile, u0);
        rows.push_back({"projected_relative_mass", num(relative_mass(u0, c.gamma))});
    }

    Trajectory tr;
    switch (c.method) {
    case Method::Series: {
        auto s = project_initial(u0, c.gamma, p.q, 64);
        rows.push_back({"series_terms", std::to_string(s.size())});
        rows.push_back({"truncation_error_estimate", num(s.truncation_error_estimate)});
        tr = evolve_series(s, g, times);
        break;
    }
    case Method::Multiplier:
        tr = evolve_general(u0, fact, times);
        break;
    case Method::Explicit: {
        ExplicitSolver es(u0, c.gamma);
        rows.push_back({"branch", branch_name(es.branch())});
        for (std::size_t n = 0; n < es.slow_coeffs().size(); ++n)
            rows.push_back({"slow_coeff_" + std::to_string(n + 1), num(es.slow_coeffs()[n])});
        tr = es.run(times);
        break;
    }
    case Method::Oracle:
        tr = run(u0, p, c.gamma, times.back(), times);
        break;
    }

    fs::path out(c.out);
    std::string norms = variable_comment(c) +
                        "# norm = (int |u|^2 x^(2/gamma-1) dx)^(1/2) in the transformed variable\n"
                        "t,weighted_l2_norm\n";
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        norms += num(tr.times[i]) + "," + num(tr.norms[i]) + "\n";
        char name[64];
        std::snprintf(name, sizeof name, "snapshot_%03zu.csv", i);
        write_atomic(out / name, "# t=" + num(tr.times[i]) + "\n" + function_csv(c, tr.snapshots[i], "u"));
    }
    write_atomic(out / "norms.csv", norms);
    try {
        rows.push_back({"decay_rate", num(decay_rate(tr, c.fit_t0, c.fit_t1))});
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::WindowTooShort) throw;
        std::cerr << "fragtool: decay_rate: " << e.what() << "\n";
        rows.push_back({"decay_rate", "nan"});
    }
    rows.push_back({"fit_t0", num(c.fit_t0)});
    rows.push_back({"fit_t1", num(c.fit_t1)});
    write_atomic(out / "summary.csv", summary_csv(rows));
    std::cout << "method " << method_name(c.method);
    for (const auto& [k, v] : rows)
        if (k == "branch" || k == "decay_rate") std::cout << ", " << k << " " << v;
    std::cout << "\n";
    return Ok;
}

int cmd_spectrum(const ExperimentConfig& c) {
    auto p = config_kernel(c);
    auto fact = factor_kernel(p, c.gamma);
    auto s = spectrum_summary(c.gamma, fact.nu, c.n_max);
    std::string csv = "kind,value\n";
    for (double d : s.discrete) csv += "discrete," + num(d) + "\n";
    csv += "continuous_abscissa," + num(s.continuous_abscissa) + "\n";
    csv += "continuous_abscissa_shifted," + num(s.continuous_abscissa_shifted) + "\n";
    csv += "crossing_index," + std::to_string(s.crossing_index) + "\n";
    csv += "slow_count," + std::to_string(s.slow_count) + "\n";
    csv += "nu," + num(s.nu) + "\n";
    write_atomic(fs::path(c.out) / "spectrum.csv", csv);
    std::cout << csv;
    return Ok;
}

int cmd_validate(const std::string& filter, std::uint64_t seed, const std::string& out_dir) {
    std::string report = report_header() + "\n";
    bool all = true;
    int ran = 0;
    for (int id : criterion_ids()) {
        if (!filter_matches(filter, id)) continue;
        ++ran;
        auto r = run_criterion(id, seed);
        for (const auto& ch : r.checks) report += format_check(ch) + "\n";
        all = all && r.passed();
        std::cerr << "criterion " << id << " (" << r.group << "): " << (r.passed() ? "PASS" : "FAIL") << "\n";
    }
    if (ran == 0) throw ConfigFailure("filter '" + filter + "' matches no checks");
    std::cout << report;
    if (!out_dir.empty()) write_atomic(fs::path(out_dir) / "report.csv", report);
    return all ? Ok : ValidationFailed;
}

int classify(const Error& e) {
    switch (e.kind()) {
    case ErrorKind::NotZeroMass:
    case ErrorKind::BranchUnsupported:
    case ErrorKind::MomentDiverges:
        return Precondition;
    case ErrorKind::InvalidArgument:
    case ErrorKind::MassNotNormalized:
    case ErrorKind::AllZero:
        return ConfigError;
    default:
        return NumericalFailure;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fragtool: fragmentation equation toolkit"};
    app.require_subcommand(1);
    std::string config_path, out_dir, method, filter;
    bool project_mass = false, transformed = false;
    long long seed = -1;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "flat key = value config file");
        sub->add_option("--out", out_dir, "output directory");
    };
    auto* ss = app.add_subcommand("selfsimilar", "self-similar profile and summary");
    add_common(ss);
    ss->add_flag("--transformed", transformed, "emit the internal variable");
    auto* ev = app.add_subcommand("evolve", "evolve zero-mass initial data");
    add_common(ev);
    ev->add_option("--method", method, "series | multiplier | explicit | oracle");
    ev->add_flag("--project-mass", project_mass, "subtract m u_S when the data carries mass");
    ev->add_flag("--transformed", transformed, "emit the internal variable");
    auto* sp = app.add_subcommand("spectrum", "discrete and continuous spectrum summary");
    add_common(sp);
    auto* va = app.add_subcommand("validate", "run the check battery");
    add_common(va);
    va->add_option("--filter", filter, "comma separated groups or criterion numbers");
    va->add_option("--seed", seed, "seed for sampled contour points")->check(CLI::NonNegativeNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return ConfigError;
    }

    std::string stage = "config";
    try {
        ExperimentConfig c = config_path.empty() ? ExperimentConfig{} : load_config(config_path);
        if (!out_dir.empty()) c.out = out_dir;
        if (!method.empty()) set_config_value(c, "method", method);
        if (project_mass) c.project_mass = true;
        if (transformed) c.transformed = true;
        if (seed >= 0) c.seed = std::uint64_t(seed);
        validate_config(c);

        if (va->parsed()) {
            stage = "validate";
            return cmd_validate(filter, c.seed, out_dir);
        }
        if (ss->parsed()) {
            stage = "selfsimilar";
            return cmd_selfsimilar(c);
        }
        if (ev->parsed()) {
            stage = std::string("evolve (") + method_name(c.method) + ")";
            return cmd_evolve(c);
        }
        stage = "spectrum";
        return cmd_spectrum(c);
    } catch (const ConfigFailure& e) {
        std::cerr << "fragtool: config error: " << e.what() << "\n";
        return ConfigError;
    } catch (const Error& e) {
        int code = stage == "config" ? ConfigError : classify(e);
        std::cerr << "fragtool: " << stage << ": " << e.what() << "\n";
        return code;
    } catch (const std::exception& e) {
        std::cerr << "fragtool: " << stage << ": " << e.what() << "\n";
        return NumericalFailure;
    }
}
