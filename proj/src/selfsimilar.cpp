#include "frag/selfsimilar.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <cmath>
#include <vector>

#include "frag/error.hpp"
#include "frag/specfun.hpp"

namespace frag {

cplx selfsimilar_mellin_raw(const KernelFactorization& fact, cplx z) {
    GammaRatioSpec spec;
    for (double s : fact.shifts()) spec.shifts_num.emplace_back(s, 0.0);
    for (cplx r : fact.roots) spec.shifts_den.push_back(-r);
    return gamma_ratio(z, spec);
}

cplx selfsimilar_mellin(const KernelFactorization& fact, cplx z) {
    const double m = selfsimilar_mellin_raw(fact, cplx(2.0 / fact.gamma, 0.0)).real();
    return selfsimilar_mellin_raw(fact, z) / m;
}

SelfSimilarProfile selfsimilar_profile(const KernelFactorization& fact, const GridFunction& templ) {
    SelfSimilarProfile out;
    out.fact = fact;
    out.normalization = selfsimilar_mellin_raw(fact, cplx(2.0 / fact.gamma, 0.0)).real();
    GammaRatioSpec spec;
    for (double s : fact.shifts()) spec.shifts_num.emplace_back(s, 0.0);
    for (cplx r : fact.roots) spec.shifts_den.push_back(-r);
    const double logm = std::log(std::abs(out.normalization));
    const double sgn = out.normalization >= 0 ? 1.0 : -1.0;
    InverseOptions opt;
    opt.delta = 0.5;
    opt.saddle = true;
    // log domain keeps the far contour lines (Re z up to 150) from overflowing
    out.profile = inverse_on_grid(
        [&](cplx z) { return sgn * std::exp(log_gamma_ratio(z, spec) - logm); }, templ, opt);
    out.profile.tag = VariableTag::Transformed;
    out.mass = 1.0;
    if (templ.xmax() >= 30.0) {
        try {
            out.tail_exponent_fit = tail_exponent(out.profile);
            out.tail_fitted = true;
        } catch (const Error&) {
            out.tail_fitted = false;
        }
    }
    return out;
}

namespace {

// ∫_1^∞ w(s) Q(xs) e^{-xs} ds with w(s) = s^{-c}(s-1)^{k-1}/Γ(k), s = 1+r
double beta_exp_integral(double c, double k, const std::vector<double>& Q, double x) {
    auto poly = [&](double y) {
        double r = 0.0;
        for (std::size_t i = Q.size(); i-- > 0;) r = r * y + Q[i];
        return r;
    };
    // r in [0,1]: Gauss-Jacobi with weight r^{k-1}
    auto rule = gauss_jacobi01(64, 0.0, k - 1.0);
    double s1 = 0.0;
    for (std::size_t i = 0; i < rule->nodes.size(); ++i) {
        double r = rule->nodes[i];
        double s = 1.0 + r;
        s1 += rule->weights[i] * std::pow(s, -c) * poly(x * s) * std::exp(-x * r);
    }
    boost::math::quadrature::exp_sinh<double> es;
    auto g = [&](double r) {
        double s = 2.0 + r;
        double v = std::pow(s, -c) * std::pow(s - 1.0, k - 1.0) * poly(x * s) * std::exp(-x * (1.0 + r));
        return std::isfinite(v) ? v : 0.0;
    };
    double s2 = es.integrate(g, 1e-13);
    return std::exp(-x) * (s1 + s2) / std::tgamma(k);
}

}  // namespace

double selfsimilar_linear_closed(double a0, double gamma, double x) {
    if (!(x >= 0.0)) throw Error(ErrorKind::InvalidArgument, "x must be nonnegative");
    const double c = a0 / (2.0 * gamma);
    const double ig = 1.0 / gamma;
    if (std::abs(a0 - 2.0) < 1e-14) return std::exp(-x);
    if (a0 > 2.0) {
        if (x == 0.0) return std::tgamma(ig) / std::tgamma(c);
        return beta_exp_integral(c, c - ig, {1.0}, x);
    }
    // lift c by K so the base transform Γ(z)Γ(z+1/γ)/Γ(z+c+K) is of the a0>2 type,
    // then apply ∏(c+j - x d/dx) through (a Q - y Q' + y Q)
    const int K = int(std::ceil(ig - c - 1e-14));
    if (K > 3)
        throw Error(ErrorKind::InvalidArgument, "closed form limited to three derivative steps");
    std::vector<double> Q{1.0};
    for (int j = 0; j < K; ++j) {
        const double a = c + j;
        std::vector<double> R(Q.size() + 1, 0.0);
        for (std::size_t i = 0; i < Q.size(); ++i) {
            R[i] += a * Q[i];
            R[i + 1] += Q[i];
            if (i > 0) R[i] -= double(i) * Q[i];
        }
        Q = R;
    }
    const double c2 = c + K;
    const double k2 = c2 - ig;
    if (std::abs(k2) < 1e-12) {
        double r = 0.0;
        for (std::size_t i = Q.size(); i-- > 0;) r = r * x + Q[i];
        return r * std::exp(-x);
    }
    if (x == 0.0) return Q[0] * std::tgamma(ig) / std::tgamma(c2);
    return beta_exp_integral(c2, k2, Q, x);
}

double tail_exponent(const GridFunction& u) {
    if (u.xmax() < 30.0) throw Error(ErrorKind::InsufficientTail, "grid must reach x >= 30");
    const double lo = u.xmax() / 10.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u.xs[i] < lo) continue;
        if (!(u.values[i] > 0.0))
            throw Error(ErrorKind::InsufficientTail, "profile not positive on the last decade");
        double lx = std::log(u.xs[i]);
        double ly = std::log(u.values[i]) + u.xs[i];
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++m;
    }
    if (m < 5) throw Error(ErrorKind::InsufficientTail, "too few points on the last decade");
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

double tail_exponent(const SelfSimilarProfile& p) { return tail_exponent(p.profile); }

double value_at_zero(const KernelFactorization& fact, bool normalized) {
    for (cplx r : fact.roots) {
        if (std::abs(r.imag()) < 1e-12 && r.real() > -1e-12 &&
            std::abs(r.real() - std::round(r.real())) < 1e-12)
            throw Error(ErrorKind::PoleHit, "1/Γ(-z_i) vanishes: a root sits at a nonnegative integer");
    }
    GammaRatioSpec spec;
    auto sh = fact.shifts();
    for (std::size_t j = 1; j < sh.size(); ++j) spec.shifts_num.emplace_back(sh[j], 0.0);
    for (cplx r : fact.roots) spec.shifts_den.push_back(-r);
    double v = gamma_ratio(cplx(0.0, 0.0), spec).real();
    if (normalized) v /= selfsimilar_mellin_raw(fact, cplx(2.0 / fact.gamma, 0.0)).real();
    return v;
}

}  // namespace frag
