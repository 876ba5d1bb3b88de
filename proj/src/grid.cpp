#include "frag/grid.hpp"

#include <algorithm>
#include <cmath>

#include "frag/error.hpp"

namespace frag {

const char* tag_name(VariableTag t) {
    return t == VariableTag::Original ? "original" : "transformed";
}

double GridFunction::log_step() const {
    if (xs.size() < 2) return 0.0;
    return std::log(xs.back() / xs.front()) / double(xs.size() - 1);
}

GridFunction GridFunction::zeros_like() const {
    GridFunction g;
    g.xs = xs;
    g.values.assign(xs.size(), 0.0);
    g.tag = tag;
    return g;
}

GridFunction make_log_grid(double xmin, double xmax, std::size_t n, VariableTag tag) {
    if (!(xmin > 0.0) || !(xmax > xmin) || n < 8)
        throw Error(ErrorKind::InvalidArgument, "bad grid parameters");
    GridFunction g;
    g.tag = tag;
    g.xs.resize(n);
    const double y0 = std::log(xmin);
    const double h = (std::log(xmax) - y0) / double(n - 1);
    for (std::size_t i = 0; i < n; ++i) g.xs[i] = std::exp(y0 + h * double(i));
    g.values.assign(n, 0.0);
    return g;
}

GridFunction make_log_grid(const GridSpec& s, VariableTag tag) {
    return make_log_grid(s.xmin, s.xmax, s.points, tag);
}

GridFunction sample_on(const GridFunction& templ, const std::function<double(double)>& f) {
    GridFunction g = templ.zeros_like();
    for (std::size_t i = 0; i < g.size(); ++i) g.values[i] = f(g.xs[i]);
    return g;
}

void check_grid(const GridFunction& f, bool require_standard_span) {
    if (f.xs.size() != f.values.size() || f.xs.size() < 8)
        throw Error(ErrorKind::InvalidArgument, "grid and values size mismatch");
    const double h = f.log_step();
    if (!(h > 0.0)) throw Error(ErrorKind::InvalidArgument, "grid not increasing");
    for (std::size_t i = 1; i < f.size(); ++i) {
        double hi = std::log(f.xs[i] / f.xs[i - 1]);
        if (std::abs(hi - h) > 1e-12)
            throw Error(ErrorKind::InvalidArgument, "grid is not log-uniform");
    }
    for (double v : f.values)
        if (!std::isfinite(v)) throw Error(ErrorKind::InvalidArgument, "non-finite sample");
    if (require_standard_span && (f.xmin() > 1e-4 * (1 + 1e-9) || f.xmax() < 1e2 * (1 - 1e-9)))
        throw Error(ErrorKind::InvalidArgument, "grid must span at least [1e-4, 1e2]");
}

double TailModel::eval(double x) const {
    if (!valid) return 0.0;
    return sign * std::exp(logC - a * std::log(x) - b * x);
}

TailModel fit_tail(const std::vector<double>& xs, const std::vector<double>& vs, int npts) {
    TailModel m;
    const std::size_t n = xs.size();
    if (n < std::size_t(npts)) return m;
    double sgn = vs[n - 1] >= 0 ? 1.0 : -1.0;
    for (std::size_t i = n - npts; i < n; ++i)
        if (!(vs[i] * sgn > 0.0)) return m;
    // least squares for log|u| = logC - a log x - b x
    double S[3][3] = {{0}}, r[3] = {0};
    for (std::size_t i = n - npts; i < n; ++i) {
        double f[3] = {1.0, -std::log(xs[i]), -xs[i]};
        double y = std::log(std::abs(vs[i]));
        for (int p = 0; p < 3; ++p) {
            r[p] += f[p] * y;
            for (int q = 0; q < 3; ++q) S[p][q] += f[p] * f[q];
        }
    }
    auto solve2 = [&](double& c0, double& c1) {
        double det = S[0][0] * S[1][1] - S[0][1] * S[1][0];
        c0 = (r[0] * S[1][1] - S[0][1] * r[1]) / det;
        c1 = (S[0][0] * r[1] - S[1][0] * r[0]) / det;
    };
    // full 3x3 by Cramer
    auto det3 = [](double A[3][3]) {
        return A[0][0] * (A[1][1] * A[2][2] - A[1][2] * A[2][1]) -
               A[0][1] * (A[1][0] * A[2][2] - A[1][2] * A[2][0]) +
               A[0][2] * (A[1][0] * A[2][1] - A[1][1] * A[2][0]);
    };
    double D = det3(S);
    double sol[3];
    bool ok = std::abs(D) > 1e-300;
    if (ok) {
        for (int c = 0; c < 3; ++c) {
            double A[3][3];
            for (int p = 0; p < 3; ++p)
                for (int q = 0; q < 3; ++q) A[p][q] = (q == c) ? r[p] : S[p][q];
            sol[c] = det3(A) / D;
        }
    }
    if (!ok || !std::isfinite(sol[2]) || sol[2] < 0.0) {
        solve2(sol[0], sol[1]);
        sol[2] = 0.0;
    }
    m.valid = std::isfinite(sol[0]) && std::isfinite(sol[1]);
    m.logC = sol[0];
    m.a = sol[1];
    m.b = sol[2];
    m.sign = sgn;
    return m;
}

double PowerLaw::eval(double x) const {
    if (u0 == 0.0) return 0.0;
    return u0 * std::pow(x / x0, c);
}

static PowerLaw fit_power(double xa, double ua, double xb, double ub) {
    PowerLaw p;
    p.x0 = xa;
    p.u0 = ua;
    if (ua != 0.0 && ub != 0.0 && (ua > 0) == (ub > 0))
        p.c = std::log(ub / ua) / std::log(xb / xa);
    else
        p.c = 0.0;
    return p;
}

PowerLaw fit_left_power(const GridFunction& f) {
    return fit_power(f.xs[0], f.values[0], f.xs[1], f.values[1]);
}

PowerLaw fit_right_power(const GridFunction& f) {
    std::size_t n = f.size();
    return fit_power(f.xs[n - 1], f.values[n - 1], f.xs[n - 2], f.values[n - 2]);
}

GridSampler::GridSampler(const GridFunction& f)
    : f_(&f), y0_(std::log(f.xs.front())), h_(f.log_step()) {
    left_ = fit_left_power(f);
    right_ = fit_tail(f.xs, f.values);
}

double GridSampler::operator()(double x) const {
    const auto& xs = f_->xs;
    const auto& v = f_->values;
    const std::size_t n = xs.size();
    if (x <= xs.front()) return x == xs.front() ? v.front() : left_.eval(x);
    if (x >= xs.back()) return x == xs.back() ? v.back() : right_.eval(x);
    double s = (std::log(x) - y0_) / h_;
    long i = long(std::floor(s));
    long lo = std::clamp(i - 1, 0L, long(n) - 4);
    double t = s - double(lo);
    // cubic Lagrange through lo..lo+3 at offsets 0..3
    double l0 = -(t - 1) * (t - 2) * (t - 3) / 6.0;
    double l1 = t * (t - 2) * (t - 3) / 2.0;
    double l2 = -t * (t - 1) * (t - 3) / 2.0;
    double l3 = t * (t - 1) * (t - 2) / 6.0;
    return l0 * v[lo] + l1 * v[lo + 1] + l2 * v[lo + 2] + l3 * v[lo + 3];
}

static double trap_log(const GridFunction& u, const std::function<double(std::size_t)>& g) {
    const double h = u.log_step();
    double s = 0.0;
    const std::size_t n = u.size();
    for (std::size_t i = 0; i < n; ++i) {
        double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
        s += w * g(i);
    }
    return s * h;
}

double l2_norm(const GridFunction& u, double w) {
    double s = trap_log(u, [&](std::size_t i) {
        return u.values[i] * u.values[i] * std::pow(u.xs[i], w + 1.0);
    });
    return std::sqrt(std::max(0.0, s));
}

double l2_distance(const GridFunction& a, const GridFunction& b, double w) {
    if (a.size() != b.size()) throw Error(ErrorKind::InvalidArgument, "grid mismatch");
    double s = trap_log(a, [&](std::size_t i) {
        double d = a.values[i] - b.values[i];
        return d * d * std::pow(a.xs[i], w + 1.0);
    });
    return std::sqrt(std::max(0.0, s));
}

double grid_moment(const GridFunction& u, double s) {
    return trap_log(u, [&](std::size_t i) { return u.values[i] * std::pow(u.xs[i], s); });
}

GridFunction axpy(double alpha, const GridFunction& x, const GridFunction& y) {
    if (x.size() != y.size()) throw Error(ErrorKind::InvalidArgument, "grid mismatch");
    GridFunction r = y;
    for (std::size_t i = 0; i < r.size(); ++i) r.values[i] += alpha * x.values[i];
    return r;
}

GridFunction scaled(const GridFunction& x, double alpha) {
    GridFunction r = x;
    for (double& v : r.values) v *= alpha;
    return r;
}

}  // namespace frag
