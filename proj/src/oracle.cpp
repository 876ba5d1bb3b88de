#include "frag/oracle.hpp"

#include <algorithm>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <cmath>

#include "frag/error.hpp"

namespace frag {

OracleOperator::OracleOperator(const DaughterPolynomial& p, double gamma, const GridFunction& templ)
    : p_(p), gamma_(gamma), templ_(templ.zeros_like()) {
    check_grid(templ_, false);
    h_ = templ_.log_step();
    const double e = 2.0 / gamma;
    xpow_.resize(templ_.size());
    for (std::size_t k = 0; k < xpow_.size(); ++k) xpow_[k] = std::pow(templ_.xs[k], e);
    ghost1_ = std::pow(templ_.xs[0], e) * std::exp(-e * h_);
    ghost2_ = std::pow(templ_.xs[0], e) * std::exp(-2.0 * e * h_);
}

double OracleOperator::mass(const std::vector<double>& u) const {
    double s = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) s += xpow_[k] * u[k];
    return s * h_;
}

double OracleOperator::max_stable_dt() const { return 0.5 * h_ / gamma_; }

void OracleOperator::gain(const std::vector<double>& u, std::vector<double>& out) const {
    const std::size_t n = u.size();
    const auto& xs = templ_.xs;
    out.assign(n, 0.0);
    std::vector<double> psi(n), g(n);
    for (std::size_t k = 0; k < n; ++k) psi[k] = xs[k] * u[k];
    TailModel tail = fit_tail(xs, u);
    const double h = h_;
    for (std::size_t i = 0; i < p_.coeffs.size(); ++i) {
        const double a = p_.coeffs[i];
        if (a == 0.0) continue;
        const double s = p_.powers[i] / gamma_;
        const double e1 = std::exp(-s * h), e2 = std::exp(-2.0 * s * h), em = std::exp(s * h);
        // x_N^s ∫_{x_N}^∞ y^{-s} u dy from the tail model
        double gN = 0.0;
        if (tail.valid && u[n - 1] != 0.0) {
            const double xN = xs[n - 1];
            boost::math::quadrature::exp_sinh<double> es;
            auto f = [&](double r) {
                double y = xN * (1.0 + r);
                double v = std::pow(1.0 + r, -s) * tail.eval(y) * xN;
                return std::isfinite(v) ? v : 0.0;
            };
            if (tail.b > 0.0 || tail.a + s > 1.05) {
                try {
                    gN = es.integrate(f, 1e-10);
                } catch (...) {
                    gN = 0.0;
                }
            }
        }
        g[n - 1] = gN;
        for (std::size_t kk = n - 1; kk-- > 0;) {
            const std::size_t k = kk;
            double seg;
            if (k >= 1 && k + 2 < n) {
                seg = h / 24.0 * (-em * psi[k - 1] + 13.0 * psi[k] + 13.0 * e1 * psi[k + 1] - e2 * psi[k + 2]);
            } else if (k == 0) {
                seg = h / 24.0 * (9.0 * psi[0] + 19.0 * e1 * psi[1] - 5.0 * e2 * psi[2] +
                                  std::exp(-3.0 * s * h) * psi[3]);
            } else {
                // k = n-2
                seg = h / 24.0 * (std::exp(2.0 * s * h) * psi[k - 2] - 5.0 * em * psi[k - 1] +
                                  19.0 * psi[k] + 9.0 * e1 * psi[k + 1]);
            }
            g[k] = e1 * g[k + 1] + seg;
        }
        for (std::size_t k = 0; k < n; ++k) out[k] += a * g[k];
    }
}

void OracleOperator::apply(const std::vector<double>& u, std::vector<double>& out) const {
    const std::size_t n = u.size();
    std::vector<double> gn;
    gain(u, gn);
    out.resize(n);
    // second-order upwind in log x on w = x^{2/γ} u, ghost cells copy u_0
    auto w = [&](long k) {
        if (k >= 0) return xpow_[k] * u[k];
        return (k == -1 ? ghost1_ : ghost2_) * u[0];
    };
    const double c = gamma_ / (2.0 * h_);
    const auto& xs = templ_.xs;
    for (std::size_t k = 0; k < n; ++k) {
        long kk = long(k);
        double d = c * (3.0 * w(kk) - 4.0 * w(kk - 1) + w(kk - 2));
        out[k] = d / xpow_[k] - gn[k] + gamma_ * xs[k] * u[k];
    }
}

GridFunction apply_operator(const GridFunction& u, const DaughterPolynomial& p, double gamma,
                            bool check_resolution) {
    OracleOperator op(p, gamma, u);
    GridFunction out = u.zeros_like();
    op.apply(u.values, out.values);
    if (check_resolution && u.size() >= 64) {
        // Richardson estimate of the gain quadrature error from the coarsened grid
        const std::size_t n = u.size();
        const std::size_t last = (n - 1) % 2 == 0 ? n - 1 : n - 2;
        GridFunction coarse;
        coarse.tag = u.tag;
        for (std::size_t k = 0; k <= last; k += 2) {
            coarse.xs.push_back(u.xs[k]);
            coarse.values.push_back(u.values[k]);
        }
        OracleOperator opc(p, gamma, coarse);
        std::vector<double> gf, gc;
        op.gain(u.values, gf);
        opc.gain(coarse.values, gc);
        double num = 0.0, den = 0.0;
        const double hc = coarse.log_step();
        for (std::size_t k = 0; k < coarse.size(); ++k) {
            double d = gf[2 * k] - gc[k];
            num += d * d * coarse.xs[k];
            den += u.values[2 * k] * u.values[2 * k] * coarse.xs[k];
        }
        num = std::sqrt(num * hc) / 15.0;
        den = std::sqrt(den * hc);
        if (num > 1e-6 * den)
            throw Error(ErrorKind::GridTooCoarse, "gain quadrature error estimate " + std::to_string(num / den));
    }
    return out;
}

namespace {

void rk4(const OracleOperator& op, std::vector<double>& u, double dt) {
    const std::size_t n = u.size();
    std::vector<double> k1, k2, k3, k4, tmp(n);
    op.apply(u, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = u[i] - 0.5 * dt * k1[i];
    op.apply(tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = u[i] - 0.5 * dt * k2[i];
    op.apply(tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = u[i] - dt * k3[i];
    op.apply(tmp, k4);
    for (std::size_t i = 0; i < n; ++i)
        u[i] -= dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

}  // namespace

OracleState step(const OracleState& s, const DaughterPolynomial& p, double gamma, double dt) {
    OracleOperator op(p, gamma, s.grid);
    if (!(dt > 0.0) || dt >= op.max_stable_dt())
        throw Error(ErrorKind::CFLViolation, "time step exceeds 0.5 h / gamma");
    OracleState out = s;
    rk4(op, out.grid.values, dt);
    out.time = s.time + dt;
    out.mass = op.mass(out.grid.values);
    return out;
}

Trajectory run(const GridFunction& u0, const DaughterPolynomial& p, double gamma, double T,
               const std::vector<double>& snapshot_times, const OracleRunOptions& opt) {
    OracleOperator op(p, gamma, u0);
    const double dt0 = opt.cfl * u0.log_step() / gamma;
    if (dt0 >= op.max_stable_dt())
        throw Error(ErrorKind::CFLViolation, "cfl factor must stay below 0.5");
    std::vector<double> times = snapshot_times;
    std::sort(times.begin(), times.end());
    for (double t : times)
        if (t < 0.0 || t > T + 1e-12) throw Error(ErrorKind::InvalidArgument, "snapshot time outside [0, T]");

    Trajectory tr;
    std::vector<double> u = u0.values;
    const double m0 = op.mass(u);
    double t = 0.0;
    auto record = [&](double tt) {
        GridFunction g = u0.zeros_like();
        g.values = u;
        double m = op.mass(u);
        if (opt.strict_mass && std::abs(m - m0) > 1e-6 * (1.0 + std::abs(m0)))
            throw Error(ErrorKind::InvalidArgument, "first moment drifted to " + std::to_string(m));
        tr.times.push_back(tt);
        tr.norms.push_back(l2_norm(g, 2.0 / gamma - 1.0));
        tr.masses.push_back(m);
        tr.snapshots.push_back(std::move(g));
    };
    for (double target : times) {
        while (t < target - 1e-14) {
            double dt = std::min(dt0, target - t);
            rk4(op, u, dt);
            t += dt;
        }
        record(target);
    }
    return tr;
}

}  // namespace frag
