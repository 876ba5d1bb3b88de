#include "frag/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "frag/error.hpp"
#include "frag/mellin.hpp"
#include "frag/specfun.hpp"

namespace frag {

namespace {

cplx powerlaw_mellin(int n, double gamma, cplx z) {
    const double g2 = 2.0 / gamma;
    return gamma_fn(z - g2 + double(n)) * gamma_fn(g2 + 1.0 - z) * rgamma(1.0 - z);
}

}  // namespace

double eigenfunction(int n, double gamma, int q, double x, EigenBranch branch) {
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "eigenfunction index starts at 1");
    if (!(x > 0.0)) throw Error(ErrorKind::InvalidArgument, "x must be positive");
    if (branch == EigenBranch::PowerLaw) {
        InverseOptions opt;
        opt.delta = 2.0 / gamma + 0.5;
        return inverse_at([&](cplx z) { return powerlaw_mellin(n, gamma, z); }, x, opt);
    }
    const double kappa = (q + 2.0) / gamma;
    double v = factorial(n) * laguerre(n, kappa - n, x) * std::exp(-x);
    if (q > 0) v *= std::pow(x, q / gamma);
    return v;
}

GridFunction eigenfunction_grid(int n, double gamma, int q, const GridFunction& templ,
                                EigenBranch branch) {
    if (branch == EigenBranch::PowerLaw) {
        InverseOptions opt;
        opt.delta = 2.0 / gamma + 0.5;
        return inverse_on_grid([&](cplx z) { return powerlaw_mellin(n, gamma, z); }, templ, opt);
    }
    return sample_on(templ, [&](double x) { return eigenfunction(n, gamma, q, x); });
}

SpectrumSummary spectrum_summary(double gamma, double nu, int n_max) {
    if (!(gamma > 0.0)) throw Error(ErrorKind::InvalidArgument, "gamma must be positive");
    SpectrumSummary s;
    s.gamma = gamma;
    s.nu = nu;
    s.continuous_abscissa = 1.0;
    s.continuous_abscissa_shifted = 1.0 - nu;
    for (int n = 1; n <= n_max; ++n) s.discrete.push_back(n * gamma);
    s.crossing_index = int(std::floor(1.0 / gamma + 1e-12)) + 1;
    s.slow_count = s.crossing_index - 1;
    return s;
}

double relative_mass(const GridFunction& u, double gamma) {
    GridFunction a = u;
    for (double& v : a.values) v = std::abs(v);
    double den = first_moment(a, gamma);
    if (den == 0.0) return 0.0;
    return std::abs(first_moment(u, gamma)) / den;
}

namespace {

void finish_series(LaguerreSeries& s, double t_min, double rel_tol, int cap) {
    // truncation by decay of |a_n| n! e^{-nγ t_min}
    double running = 0.0;
    int keep = 0;
    for (int n = 1; n <= int(s.coeffs.size()); ++n) {
        double term = std::abs(s.coeffs[n - 1]) * factorial(n) * std::exp(-n * s.gamma * t_min);
        running += term;
        if (term >= rel_tol * running) keep = n;
    }
    s.truncated_by_cap = keep >= cap && int(s.coeffs.size()) > cap;
    keep = std::min(keep, cap);
    s.coeffs.resize(keep);
    double sc = 0.0;
    for (int n = 1; n <= keep; ++n) sc += std::abs(s.coeffs[n - 1]) * factorial(n);
    s.scale = sc;
    // geometric envelope |a_n| n! <= C ρ^n
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (int n = 1; n <= keep; ++n) {
        double b = std::abs(s.coeffs[n - 1]) * factorial(n);
        if (b <= 1e-14 * sc) continue;
        sx += n;
        sy += std::log(b);
        sxx += double(n) * n;
        sxy += n * std::log(b);
        ++m;
    }
    if (m >= 2) {
        double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        double icpt = (sy - slope * sx) / m;
        s.gevrey_rho = std::exp(slope);
        double worst = 0.0;
        for (int n = 1; n <= keep; ++n) {
            double b = std::abs(s.coeffs[n - 1]) * factorial(n);
            if (b > 0) worst = std::max(worst, std::log(b) - (icpt + slope * n));
        }
        s.gevrey_C = std::exp(icpt + worst);
    } else {
        s.gevrey_rho = 0.0;
        s.gevrey_C = sc;
    }
    s.gevrey_ok = s.gevrey_rho < 1.0;
    if (s.truncated_by_cap && keep > 0)
        s.truncation_error_estimate =
            std::abs(s.coeffs[keep - 1]) * factorial(keep) / std::max(1e-300, 1.0 - std::min(0.99, s.gevrey_rho));
    else
        s.truncation_error_estimate = 0.0;
}

}  // namespace

LaguerreSeries make_series(double gamma, int q, const std::vector<double>& coeffs) {
    LaguerreSeries s;
    s.gamma = gamma;
    s.q = q;
    s.kappa = (q + 2.0) / gamma;
    s.k = int(std::floor(s.kappa + 1e-12));
    s.delta = std::max(0.0, s.kappa - s.k);
    s.coeffs = coeffs;
    finish_series(s, 0.0, 0.0, 1 << 20);
    return s;
}

LaguerreSeries project_initial(const GridFunction& u0, double gamma, int q, int n_max,
                               const ProjectionOptions& opt) {
    if (!(gamma > 0.0) || q < 0) throw Error(ErrorKind::InvalidArgument, "bad series parameters");
    {
        double rm = relative_mass(u0, gamma);
        if (rm > opt.mass_tol)
            throw Error(ErrorKind::NotZeroMass, "initial data carries relative mass " + std::to_string(rm));
    }
    LaguerreSeries s;
    s.gamma = gamma;
    s.q = q;
    s.kappa = (q + 2.0) / gamma;
    s.k = int(std::floor(s.kappa + 1e-12));
    s.delta = s.kappa - s.k;
    if (s.delta < 1e-12) s.delta = 0.0;

    GridFunction g = u0;
    if (q > 0)
        for (std::size_t i = 0; i < g.size(); ++i) g.values[i] *= std::pow(g.xs[i], -q / gamma);
    // Laguerre coefficients in L_j^{(κ)} e^{-x}. For δ > 0 this equals projecting the upper
    // fractional integral onto L_j^{(k)}, because the lower integral of order δ maps
    // x^k L_j^{(k)} to Γ(j+k+1)/Γ(j+κ+1) x^κ L_j^{(κ)}.
    const int J = opt.j_max;
    std::vector<double> alpha(J + 1, 0.0);
    const double h = g.log_step();
    const double kap = s.kappa;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double x = g.xs[i];
        const double wgt = (i == 0 || i + 1 == g.size() ? 0.5 : 1.0) * h * std::pow(x, kap + 1.0) * g.values[i];
        if (wgt == 0.0) continue;
        auto L = laguerre_all(J, kap, x);
        for (int j = 0; j <= J; ++j) alpha[j] += wgt * L[j];
    }
    for (int j = 0; j <= J; ++j) alpha[j] *= std::exp(std::lgamma(j + 1.0) - std::lgamma(j + kap + 1.0));
    double amax = 0.0;
    for (int j = 0; j <= J; ++j) amax = std::max(amax, std::abs(alpha[j]));
    int Jeff = 0;
    for (int j = 0; j <= J; ++j)
        if (std::abs(alpha[j]) > opt.alpha_floor * amax) Jeff = j;
    // a_n n!^2 = Σ_{j>=n} α_j j!/(j-n)!, i.e. a_n n! = Σ_j α_j C(j,n)
    const int N = std::min(n_max, Jeff);
    s.coeffs.assign(N, 0.0);
    for (int n = 1; n <= N; ++n) {
        double b = 0.0;
        double c = 1.0;  // C(j, n) starting at j = n
        for (int j = n; j <= Jeff; ++j) {
            if (j > n) c *= double(j) / double(j - n);
            b += alpha[j] * c;
        }
        s.coeffs[n - 1] = b / factorial(n);
    }
    finish_series(s, opt.t_min, opt.rel_tol, std::min(opt.cap, std::max(n_max, 1)));
    return s;
}

double evaluate_series(const LaguerreSeries& s, double x, double t) {
    if (t < 0.0) throw Error(ErrorKind::InvalidArgument, "negative time");
    double sum = 0.0, mag = 0.0;
    for (int n = 1; n <= s.size(); ++n) {
        double c = s.coeffs[n - 1];
        if (c == 0.0) continue;
        double term = c * std::exp(-n * s.gamma * t) * factorial(n) * laguerre(n, s.kappa - n, x);
        sum += term;
        mag += std::abs(c) * factorial(n) * std::exp(-n * s.gamma * t);
    }
    if (s.truncated_by_cap) {
        const int N = s.size();
        double est = s.truncation_error_estimate * std::exp(-(N + 1) * s.gamma * t);
        if (est > 1e-6 * std::max(mag, 1e-300))
            throw Error(ErrorKind::TruncationTooLarge, "series truncation error too large at this time");
    }
    double v = sum * std::exp(-x);
    if (s.q > 0) v *= std::pow(x, s.q / s.gamma);
    return v;
}

GridFunction evaluate_series_grid(const LaguerreSeries& s, const GridFunction& templ, double t) {
    GridFunction g = templ.zeros_like();
    for (std::size_t i = 0; i < g.size(); ++i) g.values[i] = evaluate_series(s, g.xs[i], t);
    return g;
}

Trajectory evolve_series(const LaguerreSeries& s, const GridFunction& templ,
                         const std::vector<double>& times) {
    Trajectory tr;
    for (double t : times) {
        GridFunction g = evaluate_series_grid(s, templ, t);
        tr.times.push_back(t);
        tr.norms.push_back(l2_norm(g, 2.0 / s.gamma - 1.0));
        tr.masses.push_back(first_moment(g, s.gamma));
        tr.snapshots.push_back(std::move(g));
    }
    return tr;
}

cplx transfer_multiplier(const KernelFactorization& fact, cplx z) {
    GammaRatioSpec spec;
    for (cplx r : fact.roots) spec.shifts_num.push_back(-r);
    auto sh = fact.shifts();
    for (std::size_t j = 1; j < sh.size(); ++j) spec.shifts_den.emplace_back(sh[j], 0.0);
    return gamma_ratio(z, spec);
}

Trajectory evolve_general(const GridFunction& u0, const KernelFactorization& fact,
                          const std::vector<double>& times, const ProjectionOptions& opt) {
    const double gamma = fact.gamma;
    bool trivial = fact.roots.empty() && fact.p.coeffs.size() == 1;
    bool zero = std::all_of(u0.values.begin(), u0.values.end(), [](double v) { return v == 0.0; });
    Trajectory tr;
    if (zero) {
        for (double t : times) {
            tr.times.push_back(t);
            tr.snapshots.push_back(u0.zeros_like());
            tr.norms.push_back(0.0);
            tr.masses.push_back(0.0);
        }
        return tr;
    }
    {
        double rm = relative_mass(u0, gamma);
        if (rm > opt.mass_tol)
            throw Error(ErrorKind::NotZeroMass, "initial data carries relative mass " + std::to_string(rm));
    }
    const double delta = 0.5;
    InverseOptions io;
    io.saddle = true;
    GridFunction v0 = u0;
    if (!trivial)
        v0 = apply_multiplier([&](cplx z) { return transfer_multiplier(fact, z); }, u0, delta, io);
    ProjectionOptions po = opt;
    po.mass_tol = std::max(opt.mass_tol, 1e-6);
    LaguerreSeries s = project_initial(v0, gamma, 0, opt.cap, po);
    {
        // algebraically decaying Laguerre data makes the binomial recombination blow up
        double miss = l2_distance(evaluate_series_grid(s, u0, 0.0), v0);
        if (!(miss <= 1e-3 * l2_norm(v0)))
            throw Error(ErrorKind::TruncationTooLarge,
                        "series does not reproduce the transferred data (relative miss " +
                            std::to_string(miss / l2_norm(v0)) + ")");
    }
    for (double t : times) {
        GridFunction v = evaluate_series_grid(s, u0, t);
        GridFunction u = trivial ? v
                                 : apply_multiplier(
                                       [&](cplx z) { return 1.0 / transfer_multiplier(fact, z); }, v, delta);
        tr.times.push_back(t);
        tr.norms.push_back(l2_norm(u, 2.0 / gamma - 1.0));
        tr.masses.push_back(first_moment(u, gamma));
        tr.snapshots.push_back(std::move(u));
    }
    return tr;
}

double decay_rate(const Trajectory& traj, double t0, double t1) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        double t = traj.times[i];
        if (t < t0 - 1e-12 || t > t1 + 1e-12) continue;
        double n = traj.norms[i];
        if (!(n > 0.0) || !std::isfinite(n))
            throw Error(ErrorKind::WindowTooShort, "nonpositive norm inside the fit window");
        double y = std::log(n);
        sx += t;
        sy += y;
        sxx += t * t;
        sxy += t * y;
        ++m;
    }
    if (m < 5) throw Error(ErrorKind::WindowTooShort, "fewer than five snapshots in the window");
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace frag
