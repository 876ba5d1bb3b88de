#include "frag/specfun.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include "frag/error.hpp"

namespace frag {

namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178;

// B_{2k} / (2k (2k-1)), k = 1..8
constexpr double kStirling[] = {
    1.0 / 12.0,          -1.0 / 360.0,        1.0 / 1260.0,       -1.0 / 1680.0,
    1.0 / 1188.0,        -691.0 / 360360.0,   1.0 / 156.0,        -3617.0 / 122400.0,
};

bool is_nonpositive_integer(cplx z) {
    return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

cplx stirling(cplx z) {
    cplx r = (z - 0.5) * std::log(z) - z + kHalfLog2Pi;
    cplx iz = 1.0 / z, iz2 = iz * iz, p = iz;
    for (double c : kStirling) {
        r += c * p;
        p *= iz2;
    }
    return r;
}

int shift_count(cplx z) {
    if (z.real() >= 15.0) return 0;
    if (std::abs(z.imag()) >= 15.0 && z.real() >= 0.0) return 0;
    return int(std::ceil(15.0 - z.real()));
}

}  // namespace

cplx log_gamma(cplx z) {
    if (is_nonpositive_integer(z))
        throw Error(ErrorKind::PoleHit, "log_gamma at nonpositive integer");
    int n = shift_count(z);
    cplx acc = 0.0;
    for (int k = 0; k < n; ++k) acc += std::log(z + double(k));
    return stirling(z + double(n)) - acc;
}

cplx log_gamma_fast(cplx z) {
    if (is_nonpositive_integer(z))
        throw Error(ErrorKind::PoleHit, "log_gamma at nonpositive integer");
    int n = shift_count(z);
    cplx prod = 1.0;
    double logscale = 0.0;
    for (int k = 0; k < n; ++k) {
        prod *= (z + double(k));
        double m = std::abs(prod);
        if (m > 1e200 || m < 1e-200) {
            logscale += std::log(m);
            prod /= m;
        }
    }
    return stirling(z + double(n)) - std::log(prod) - logscale;
}

cplx gamma_fn(cplx z) { return std::exp(log_gamma_fast(z)); }

cplx rgamma(cplx z) {
    if (is_nonpositive_integer(z)) return 0.0;
    return std::exp(-log_gamma_fast(z));
}

cplx log_gamma_ratio(cplx z, const GammaRatioSpec& spec) {
    cplx s = 0.0;
    for (cplx a : spec.shifts_num) {
        if (is_nonpositive_integer(z + a))
            throw Error(ErrorKind::PoleHit, "gamma_ratio numerator pole");
        s += log_gamma_fast(z + a);
    }
    for (cplx b : spec.shifts_den) s -= log_gamma_fast(z + b);
    return s;
}

cplx gamma_ratio(cplx z, const GammaRatioSpec& spec) {
    for (cplx b : spec.shifts_den)
        if (is_nonpositive_integer(z + b)) {
            for (cplx a : spec.shifts_num)
                if (is_nonpositive_integer(z + a))
                    throw Error(ErrorKind::PoleHit, "gamma_ratio numerator pole");
            return 0.0;
        }
    return std::exp(log_gamma_ratio(z, spec));
}

// ---------------------------------------------------------------- Kummer

double kummer_M_series(double a, double b, double x) {
    double term = 1.0, sum = 1.0;
    for (int k = 0; k < 2000; ++k) {
        term *= (a + k) / (b + k) * x / (k + 1);
        sum += term;
        if (term == 0.0) break;
        if (std::abs(term) < 1e-17 * std::abs(sum) && k > std::abs(x)) break;
    }
    return sum;
}

namespace {

// e^{-x} M(a,b,x) for large x > 0: Γ(b)/Γ(a) x^{a-b} Σ (b-a)_s (1-a)_s / (s! x^s); the
// algebraic companion term is O(e^{-x}) relative and dropped
double kummer_scaled_asymptotic(double a, double b, double x) {
    double sum = 1.0, term = 1.0, last = 1e300;
    for (int s = 0; s < 200; ++s) {
        double next = term * (b - a + s) * (1.0 - a + s) / ((s + 1) * x);
        if (std::abs(next) >= last) break;
        last = std::abs(next);
        term = next;
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    double lg = std::lgamma(b) - std::lgamma(a) + (a - b) * std::log(x);
    double sg = std::tgamma(b) / std::tgamma(a) >= 0 ? 1.0 : -1.0;
    return sg * std::exp(lg) * sum;
}

}  // namespace

double kummer_M_asymptotic(double a, double b, double x) {
    return std::exp(x) * kummer_scaled_asymptotic(a, b, x);
}

// The asymptotic series alone misses an algebraic term of relative size
// x^{b-2a} e^{-x}; at 30 that is still 1e-6 for negative a, so the switch sits at 50.
constexpr double kKummerSwitch = 50.0;

double kummer_M(double a, double b, double x) {
    if (b <= 0.0 && b == std::floor(b))
        throw Error(ErrorKind::ParameterPole, "kummer_M with b a nonpositive integer");
    if (x == 0.0) return 1.0;
    if (x < 0.0) {
        // Kummer transformation keeps the series free of cancellation; for large
        // |x| the exponentials cancel analytically
        const double ap = b - a;
        bool term = ap <= 0.0 && ap == std::floor(ap);
        if (-x <= kKummerSwitch || term) return std::exp(x) * kummer_M_series(ap, b, -x);
        return kummer_scaled_asymptotic(ap, b, -x);
    }
    bool terminating = a <= 0.0 && a == std::floor(a);
    if (x <= kKummerSwitch || terminating) return kummer_M_series(a, b, x);
    return kummer_M_asymptotic(a, b, x);
}

// ---------------------------------------------------------------- Laguerre

double laguerre(int n, double alpha, double x) {
    if (n <= 0) return 1.0;
    double l0 = 1.0, l1 = 1.0 + alpha - x;
    for (int k = 1; k < n; ++k) {
        double l2 = ((2 * k + 1 + alpha - x) * l1 - (k + alpha) * l0) / (k + 1);
        l0 = l1;
        l1 = l2;
    }
    return l1;
}

std::vector<double> laguerre_all(int nmax, double alpha, double x) {
    std::vector<double> out(std::max(nmax, 0) + 1);
    out[0] = 1.0;
    if (nmax >= 1) out[1] = 1.0 + alpha - x;
    for (int k = 1; k < nmax; ++k)
        out[k + 1] = ((2 * k + 1 + alpha - x) * out[k] - (k + alpha) * out[k - 1]) / (k + 1);
    return out;
}

// ---------------------------------------------------------------- quadrature

QuadRule gauss_jacobi(int n, double al, double be) {
    if (n < 1 || !(al > -1.0) || !(be > -1.0))
        throw Error(ErrorKind::InvalidArgument, "gauss_jacobi parameters");
    Eigen::VectorXd diag(n), sub(std::max(n - 1, 1));
    const double ab = al + be;
    for (int k = 0; k < n; ++k) {
        double d = 2.0 * k + ab;
        if (k == 0)
            diag(k) = (be - al) / (ab + 2.0);
        else
            diag(k) = (be * be - al * al) / (d * (d + 2.0));
    }
    for (int k = 1; k < n; ++k) {
        double d = 2.0 * k + ab;
        double v;
        if (k == 1)
            v = 4.0 * (1.0 + al) * (1.0 + be) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
        else
            v = 4.0 * k * (k + al) * (k + be) * (k + ab) / (d * d * (d + 1.0) * (d - 1.0));
        sub(k - 1) = std::sqrt(v);
    }
    QuadRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(al + 1.0) +
                                std::lgamma(be + 1.0) - std::lgamma(ab + 2.0));
    if (n == 1) {
        r.nodes[0] = diag(0);
        r.weights[0] = mu0;
        return r;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub.head(n - 1), Eigen::ComputeEigenvectors);
    for (int k = 0; k < n; ++k) {
        r.nodes[k] = es.eigenvalues()(k);
        double v0 = es.eigenvectors()(0, k);
        r.weights[k] = mu0 * v0 * v0;
    }
    return r;
}

std::shared_ptr<const QuadRule> gauss_jacobi01(int n, double a, double b) {
    static std::mutex mu;
    static std::map<std::tuple<int, double, double>, std::shared_ptr<const QuadRule>> cache;
    auto key = std::make_tuple(n, a, b);
    {
        std::lock_guard<std::mutex> lk(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    QuadRule r = gauss_jacobi(n, a, b);
    const double scale = std::pow(2.0, -a - b - 1.0);
    for (int k = 0; k < n; ++k) {
        r.nodes[k] = 0.5 * (1.0 + r.nodes[k]);
        r.weights[k] *= scale;
    }
    auto p = std::make_shared<const QuadRule>(std::move(r));
    std::lock_guard<std::mutex> lk(mu);
    cache.emplace(key, p);
    return p;
}

// ---------------------------------------------------------------- fractional integrals

namespace {

// (1-r)^e, r in [0, 1/2]
double pow_one_minus(double r, double e) {
    if (r < 1e-4) return 1.0 - e * r + 0.5 * e * (e - 1.0) * r * r;
    return std::pow(1.0 - r, e);
}

// ∫_a^b g dℓ by 8-point Gauss-Legendre panels at most 0.25 wide
template <class G>
double log_panels(double a, double b, G&& g) {
    if (!(b > a)) return 0.0;
    static const auto gl = gauss_jacobi01(8, 0.0, 0.0);
    const int m = std::max(1, int(std::ceil((b - a) / 0.25)));
    const double w = (b - a) / m;
    double s = 0.0;
    for (int p = 0; p < m; ++p)
        for (std::size_t k = 0; k < gl->nodes.size(); ++k) s += gl->weights[k] * g(a + w * (p + gl->nodes[k]));
    return s * w;
}

}  // namespace

// The w-integral is split at 1/2. Gauss-Jacobi takes the singular half; the other
// half is done in log y so data concentrated far from x is still resolved.
GridFunction fractional_integral(double nu, const GridFunction& f, FracDirection dir) {
    if (!(nu > 0.0) || nu > 1.0)
        throw Error(ErrorKind::InvalidArgument, "fractional order must lie in (0,1]");
    GridSampler S(f);
    GridFunction out = f.zeros_like();
    const double gnu = std::tgamma(nu);
    const double lo = std::log(f.xmin()), hi = std::log(f.xmax());
    const PowerLaw left = fit_left_power(f);
    const TailModel tail = fit_tail(f.xs, f.values);

    if (dir == FracDirection::Upper) {
        bool tail_zero = std::abs(f.values.back()) <= 1e-300;
        double bx = tail.b * f.xmax();
        if (!tail_zero && tail.valid && ((bx < 1e-4 && tail.a <= nu) || bx < -1e-4))
            throw Error(ErrorKind::DivergentTail, "upper fractional integral diverges");
    } else if (left.u0 != 0.0 && left.c <= -1.0) {
        throw Error(ErrorKind::DivergentTail, "lower fractional integral diverges at the origin");
    }

    // ∫_{1/2}^1 (1-w)^{ν-1} h(w) dw
    auto singular_half = [&](auto&& h) {
        double prev = 0.0;
        for (int n = 32; n <= 512; n *= 2) {
            auto q = gauss_jacobi01(n, nu - 1.0, 0.0);
            double s = 0.0;
            for (std::size_t k = 0; k < q->nodes.size(); ++k) s += q->weights[k] * h(0.5 + 0.5 * q->nodes[k]);
            s *= std::pow(2.0, -nu);
            if (n > 32 && std::abs(s - prev) <= 1e-10 * std::abs(s)) return s;
            prev = s;
        }
        return prev;
    };

    for (std::size_t i = 0; i < f.size(); ++i) {
        const double x = f.xs[i], lx = std::log(x);
        double v = 0.0;
        if (dir == FracDirection::Lower) {
            v = singular_half([&](double w) { return S(x * w); });
            // ∫_0^{1/2} (1-w)^{ν-1} f(xw) dw, on the grid in log y
            v += log_panels(lo, lx - std::log(2.0), [&](double l) {
                double r = std::exp(l - lx);
                return pow_one_minus(r, nu - 1.0) * r * S(std::exp(l));
            });
            // below the grid: power law, w in [0, w1]
            const double w1 = std::min(0.5, f.xmin() / x);
            if (left.u0 != 0.0) {
                auto q = gauss_jacobi01(24, 0.0, left.c);
                double s = 0.0;
                for (std::size_t k = 0; k < q->nodes.size(); ++k)
                    s += q->weights[k] * std::pow(1.0 - w1 * q->nodes[k], nu - 1.0);
                v += left.u0 * std::pow(x * w1 / left.x0, left.c) * w1 * s;
            }
            v *= std::pow(x, nu) / gnu;
        } else {
            v = singular_half([&](double w) { return std::pow(w, -nu - 1.0) * S(x / w); });
            // ∫_{2x}^∞ (1-x/y)^{ν-1} (y/x)^ν f(y) dy/y
            auto g = [&](double l) {
                return pow_one_minus(std::exp(lx - l), nu - 1.0) * std::exp(nu * (l - lx)) * S(std::exp(l));
            };
            const double a = lx + std::log(2.0);
            v += log_panels(a, hi, g);
            if (tail.valid) {
                const double b0 = std::max(a, hi);
                v += log_panels(b0, b0 + 12.0, g);
                const double Y = std::exp(b0 + 12.0);
                if (tail.a > nu && tail.b * Y < 50.0)
                    v += tail.eval(Y) * std::exp(nu * (std::log(Y) - lx)) / (tail.a - nu);
            }
            v /= gnu;
        }
        out.values[i] = v;
    }
    return out;
}

// ---------------------------------------------------------------- combinatorics

double binomial(double n, double k) {
    if (k < 0) return 0.0;
    double r = 1.0;
    for (int j = 0; j < int(k); ++j) r *= (n - j) / (j + 1);
    return r;
}

double falling(double x, int k) {
    double r = 1.0;
    for (int j = 0; j < k; ++j) r *= (x - j);
    return r;
}

double rising(double x, int k) {
    double r = 1.0;
    for (int j = 0; j < k; ++j) r *= (x + j);
    return r;
}

double factorial(int n) { return std::tgamma(n + 1.0); }

}  // namespace frag
