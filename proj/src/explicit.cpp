#include "frag/explicit.hpp"

#include <algorithm>
#include <cmath>

#include "frag/error.hpp"
#include "frag/evolution.hpp"
#include "frag/specfun.hpp"

namespace frag {

namespace {

cplx rising_c(cplx s, int j) {
    cplx r = 1.0;
    for (int i = 0; i < j; ++i) r *= s + double(i);
    return r;
}

cplx seed_gamma_factor(cplx s, double gamma, SeedRelation rel) {
    const double top = rel == SeedRelation::Corrected ? 1.0 : 2.0;
    return std::exp(log_gamma(top - 1.0 / gamma - s) - log_gamma(1.0 + 1.0 / gamma - s));
}

}  // namespace

// ---------------------------------------------------------------- seeds

AnalyticSeed::AnalyticSeed(double gamma, double beta, std::vector<double> coeffs, SeedRelation rel)
    : gamma_(gamma), beta_(beta), c_(std::move(coeffs)), rel_(rel) {
    if (!(gamma > 0.0) || c_.empty()) throw Error(ErrorKind::InvalidArgument, "bad analytic seed");
}

AnalyticSeed AnalyticSeed::zero_mass(double gamma, double beta, SeedRelation rel) {
    // u0~(2/γ) is proportional to F~(1/γ) = c0 Γ(1/γ+β) + c1 Γ(1/γ+β+1)
    return AnalyticSeed(gamma, beta, {1.0, -1.0 / (1.0 / gamma + beta)}, rel);
}

double AnalyticSeed::D(int j, double v) const {
    // v^j d^j/dv^j [v^p e^{-v}] = Σ_i C(j,i) p^{(j-i)} (-1)^i v^{p+i} e^{-v}
    double s = 0.0;
    for (std::size_t k = 0; k < c_.size(); ++k) {
        if (c_[k] == 0.0) continue;
        const double p = beta_ + double(k);
        double inner = 0.0;
        for (int i = 0; i <= j; ++i)
            inner += binomial(j, i) * falling(p, j - i) * ((i % 2) ? -1.0 : 1.0) * std::pow(v, i);
        s += c_[k] * inner * std::pow(v, p);
    }
    return s * std::exp(-v);
}

cplx AnalyticSeed::mellin(cplx s) const {
    cplx r = 0.0;
    for (std::size_t k = 0; k < c_.size(); ++k)
        if (c_[k] != 0.0) r += c_[k] * std::exp(log_gamma(s + beta_ + double(k)));
    return r;
}

GridSeed::GridSeed(const GridFunction& u0, double gamma, int jmax, SeedRelation rel)
    : u0_(u0), gamma_(gamma), rel_(rel) {
    check_grid(u0_, false);
    if (!(gamma > 0.0) || jmax < 0) throw Error(ErrorKind::InvalidArgument, "bad grid seed");
    PowerLaw pl = fit_left_power(u0_), pr = fit_right_power(u0_);
    const double c = u0_.values.front() == 0.0 ? 0.0 : pl.c;
    const double zlo = -c;
    double zhi = rel == SeedRelation::Corrected ? 1.0 : 2.0;
    {
        // a right end that changes sign is roundoff, not a power law
        const std::size_t n = u0_.size();
        bool clean = std::abs(u0_.values[n - 1]) > 1e-200;
        for (std::size_t k = 1; k < 4 && clean; ++k)
            clean = (u0_.values[n - 1 - k] > 0) == (u0_.values[n - 1] > 0);
        if (clean) zhi = std::min(zhi, -pr.c);
    }
    if (zlo >= zhi - 0.02)
        throw Error(ErrorKind::StripViolation, "no line for the seed transform: left power " +
                                                   std::to_string(c));
    zeta0_ = (0.5 > zlo + 0.05 && 0.5 < zhi - 0.05) ? 0.5 : 0.5 * (zlo + zhi);
    beta_ = c + 1.0 / gamma;
    // a second line close to the left singularity keeps the roundoff of small-v samples
    // below v^β
    use_left_ = zeta0_ - zlo > 0.2;
    zetaL_ = zlo + 0.15;

    auto build = [&](double zeta, std::vector<GridFunction>& out) {
        InverseOptions io;
        io.delta = zeta - 1.0 / gamma;
        for (int j = 0; j <= jmax; ++j) {
            const double sign = (j % 2) ? -1.0 : 1.0;
            out.push_back(inverse_on_grid(
                [&, j, sign](cplx s) { return sign * rising_c(s, j) * mellin(s); }, u0_, io));
        }
    };
    build(zeta0_, main_);
    if (use_left_) build(zetaL_, left_);
    for (const auto& g : main_) smain_.emplace_back(g);
    for (const auto& g : left_) sleft_.emplace_back(g);
}

cplx GridSeed::u0_transform(cplx zeta) const { return forward(u0_, zeta); }

cplx GridSeed::mellin(cplx s) const {
    const auto key = std::make_pair(s.real(), s.imag());
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
    }
    cplx v = u0_transform(s + 1.0 / gamma_) * seed_gamma_factor(s, gamma_, rel_);
    std::lock_guard<std::mutex> lk(mu_);
    cache_.emplace(key, v);
    return v;
}

double GridSeed::D(int j, double v) const {
    if (j < 0 || j >= int(smain_.size())) throw Error(ErrorKind::InvalidArgument, "derivative order out of range");
    if (use_left_ && v < 1e-3) return sleft_[j](v);
    return smain_[j](v);
}

// ---------------------------------------------------------------- representation

int representation_order(double gamma) { return int(std::floor(2.0 / gamma + 1e-12)) + 1; }

namespace {

// ∫_0^1 f(w) w^b (1-w)^a dw. f varies on the scale w ~ 1/x, so [0,1] is split into
// [0,w0], geometric panels up to 1/2 and [1/2,1]; the end panels carry the Jacobi
// weights. Node counts double until the sum settles.
template <class Fn>
double panel_sum(double a, double b, double x, int n, Fn&& f, double* mag) {
    const double w0 = std::min(0.5, 1.0 / x);
    double s = 0.0;
    *mag = 0.0;
    auto add = [&](double term) {
        s += term;
        *mag += std::abs(term);
    };
    {
        // w = w0 r, weight r^b; (1-w)^a is smooth here
        auto rule = gauss_jacobi01(n, 0.0, b);
        const double sc = std::pow(w0, b + 1.0);
        for (std::size_t i = 0; i < rule->nodes.size(); ++i) {
            const double w = w0 * rule->nodes[i];
            add(sc * rule->weights[i] * std::pow(1.0 - w, a) * f(w));
        }
    }
    auto leg = gauss_jacobi01(n, 0.0, 0.0);
    for (double lo = w0; lo < 0.5 * (1.0 - 1e-12);) {
        const double hi = std::min(0.5, 2.0 * lo);
        for (std::size_t i = 0; i < leg->nodes.size(); ++i) {
            const double w = lo + (hi - lo) * leg->nodes[i];
            add((hi - lo) * leg->weights[i] * std::pow(w, b) * std::pow(1.0 - w, a) * f(w));
        }
        lo = hi;
    }
    {
        // w = (1+r)/2 on [1/2,1], weight (1-r)^a
        auto rule = gauss_jacobi01(n, a, 0.0);
        const double sc = std::pow(0.5, a + 1.0);
        for (std::size_t i = 0; i < rule->nodes.size(); ++i) {
            const double w = 0.5 * (1.0 + rule->nodes[i]);
            add(sc * rule->weights[i] * std::pow(w, b) * f(w));
        }
    }
    return s;
}

template <class Fn>
double gj_integral(double a, double b, double x, Fn&& f, const RepresentationOptions& opt) {
    double prev = 0.0, mag = 0.0;
    bool have = false;
    for (int n = opt.nodes_start; n <= opt.nodes_max; n *= 2) {
        double s = panel_sum(a, b, x, n, f, &mag);
        if (have && std::abs(s - prev) <= opt.tol * std::max(mag, 1e-300)) return s;
        prev = s;
        have = true;
    }
    return prev;
}

}  // namespace

double representation_value(const RepresentationSeed& seed, double x, double t,
                            const RepresentationOptions& opt) {
    if (!(x > 0.0)) throw Error(ErrorKind::InvalidArgument, "x must be positive");
    if (t < 0.0) throw Error(ErrorKind::InvalidArgument, "negative time");
    const double g = seed.gamma();
    const double ig = 1.0 / g;
    const int m = representation_order(g);
    const double beta = seed.small_exponent();
    const double b = std::exp(-g * t), a = -std::expm1(-g * t);
    // (m - 1/γ) falling powers and binomials, reused for every node
    std::vector<double> fall(m + 1), cm(m + 1);
    for (int k = 0; k <= m; ++k) {
        fall[k] = falling(m - ig, m - k);
        cm[k] = binomial(m, k);
    }
    auto f = [&](double w) {
        const double v = x * w;
        std::vector<double> Dj(m + 1);
        for (int j = 0; j <= m; ++j) Dj[j] = seed.D(j, b * v);
        double s = 0.0;
        for (int k = 0; k <= m; ++k) {
            double inner = 0.0;
            double ap = 1.0;  // (-a)^{k-j}, built from j = k downwards
            for (int j = k; j >= 0; --j) {
                inner += binomial(k, j) * ap * Dj[j] * std::pow(v, -double(j));
                ap *= -a;
            }
            s += cm[k] * fall[k] * std::pow(v, double(k)) * inner;
        }
        // ψ^{(m)}(v) w^{1/γ-β}, with v^{-1/γ} w^{1/γ} = x^{-1/γ}
        return std::exp(-a * v) * s * std::pow(x, -ig) * std::pow(w, -beta);
    };
    const double wa = m - 1.0 - 2.0 * ig;
    const double wb = ig + beta;
    double I = gj_integral(wa, wb, x, f, opt);
    return std::exp(-t) / std::tgamma(m - 2.0 * ig) * I;
}

GridFunction representation_grid(const RepresentationSeed& seed, const GridFunction& templ, double t,
                                 const RepresentationOptions& opt) {
    GridFunction out = templ.zeros_like();
    for (std::size_t i = 0; i < out.size(); ++i) out.values[i] = representation_value(seed, out.xs[i], t, opt);
    return out;
}

namespace {

double literal_integral(const RepresentationSeed& seed, double x, double t, double extra,
                        const RepresentationOptions& opt) {
    const double g = seed.gamma();
    if (!(g > 2.0)) throw Error(ErrorKind::BranchUnsupported, "the literal formula needs γ > 2");
    const double beta = seed.small_exponent();
    const double b = std::exp(-g * t), a = -std::expm1(-g * t);
    auto f = [&](double w) {
        const double v = x * w;
        return std::exp(-a * v) * seed.D(0, b * v) * std::pow(w, -beta);
    };
    return gj_integral(-2.0 / g, 1.0 / g + extra + beta, x, f, opt);
}

}  // namespace

double fxt_literal(const RepresentationSeed& seed, double x, double t, const RepresentationOptions& opt) {
    const double g = seed.gamma();
    double I = literal_integral(seed, x, t, 0.0, opt);
    return std::exp(-t) * std::pow(x, -1.0 / g) / std::tgamma(1.0 - 2.0 / g) * I;
}

double literal_fragmentation_term(const RepresentationSeed& seed, double x, double t,
                                  const RepresentationOptions& opt) {
    const double g = seed.gamma();
    double I = literal_integral(seed, x, t, 1.0, opt);
    return -g * std::pow(x, 1.0 - 1.0 / g) * std::exp(-t) / std::tgamma(1.0 - 2.0 / g) * I;
}

// ---------------------------------------------------------------- slow modes

SlowModeSplit remove_slow_modes(const GridFunction& u0, double gamma) {
    if (!(gamma > 0.0)) throw Error(ErrorKind::InvalidArgument, "gamma must be positive");
    const double kap = 2.0 / gamma;
    const int J = int(std::floor(kap + 1e-12)) - 1;
    SlowModeSplit r;
    r.u_star = u0;
    if (J <= 0) return r;
    r.coeffs.assign(J, 0.0);
    for (int j = 1; j <= J; ++j) {
        const double zeta = kap - j;
        double mom;
        try {
            mom = forward(u0, cplx(zeta, 0.0)).real();
        } catch (const Error& e) {
            throw Error(ErrorKind::MomentDiverges, "moment of order " + std::to_string(zeta) +
                                                       " diverges: " + e.what());
        }
        // U_n~(2/γ-j) = Γ(2/γ-j) j!/(j-n)!
        double rhs = mom / std::tgamma(zeta);
        for (int n = 1; n < j; ++n) rhs -= r.coeffs[n - 1] * factorial(j) / factorial(j - n);
        r.coeffs[j - 1] = rhs / factorial(j);
    }
    for (int n = 1; n <= J; ++n)
        r.u_star = axpy(-r.coeffs[n - 1], eigenfunction_grid(n, gamma, 0, u0), r.u_star);
    return r;
}

// ---------------------------------------------------------------- solver

const char* branch_name(ExplicitBranch b) {
    switch (b) {
    case ExplicitBranch::Primary: return "explicit";
    case ExplicitBranch::Midrange: return "midrange";
    case ExplicitBranch::SlowMode: return "slowmode";
    }
    return "?";
}

ExplicitBranch branch_for(double gamma) {
    if (!(gamma > 0.0)) throw Error(ErrorKind::InvalidArgument, "gamma must be positive");
    if (gamma > 2.0) return ExplicitBranch::Primary;
    if (gamma > 1.0) return ExplicitBranch::Midrange;
    return ExplicitBranch::SlowMode;
}

ExplicitSolver::ExplicitSolver(const GridFunction& u0, double gamma)
    : u0_(u0), gamma_(gamma), branch_(branch_for(gamma)) {
    const double rm = relative_mass(u0, gamma);
    if (rm > 1e-6) throw Error(ErrorKind::NotZeroMass, "initial data carries relative mass " + std::to_string(rm));
    GridFunction ustar = u0;
    if (branch_ == ExplicitBranch::SlowMode) {
        SlowModeSplit sp = remove_slow_modes(u0, gamma);
        slow_ = sp.coeffs;
        ustar = std::move(sp.u_star);
    }
    seed_ = std::make_unique<GridSeed>(ustar, gamma, representation_order(gamma));
}

double ExplicitSolver::value(double x, double t) const {
    double v = representation_value(*seed_, x, t);
    for (std::size_t n = 1; n <= slow_.size(); ++n)
        v += slow_[n - 1] * std::exp(-double(n) * gamma_ * t) * eigenfunction(int(n), gamma_, 0, x);
    return v;
}

GridFunction ExplicitSolver::snapshot(double t) const {
    GridFunction out = representation_grid(*seed_, u0_, t);
    for (std::size_t n = 1; n <= slow_.size(); ++n)
        out = axpy(slow_[n - 1] * std::exp(-double(n) * gamma_ * t),
                   eigenfunction_grid(int(n), gamma_, 0, u0_), out);
    return out;
}

Trajectory ExplicitSolver::run(const std::vector<double>& times) const {
    Trajectory tr;
    for (double t : times) {
        GridFunction u = snapshot(t);
        tr.times.push_back(t);
        tr.norms.push_back(l2_norm(u, 2.0 / gamma_ - 1.0));
        // roundoff plateaus far out can defeat the tail model; fall back to the bare sum
        double m;
        try {
            m = first_moment(u, gamma_);
        } catch (const Error&) {
            m = grid_moment(u, 2.0 / gamma_);
        }
        tr.masses.push_back(m);
        tr.snapshots.push_back(std::move(u));
    }
    return tr;
}

double explicit_solution(const GridFunction& u0, double gamma, double t, double x) {
    if (!(gamma > 2.0))
        throw Error(ErrorKind::BranchUnsupported,
                    "γ <= 2: use explicit_solution_midrange or the slow-mode path");
    return ExplicitSolver(u0, gamma).value(x, t);
}

double explicit_solution_midrange(const GridFunction& u0, double gamma, double t, double x) {
    if (!(gamma > 1.0 && gamma <= 2.0))
        throw Error(ErrorKind::BranchUnsupported, "midrange branch covers 1 < γ <= 2");
    return ExplicitSolver(u0, gamma).value(x, t);
}

}  // namespace frag
