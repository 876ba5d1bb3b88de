#include "frag/kernel.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "frag/error.hpp"

namespace frag {

double DaughterPolynomial::operator()(double s) const {
    double r = 0.0;
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        if (coeffs[i] != 0.0) r += coeffs[i] * std::pow(s, powers[i]);
    return r;
}

double DaughterPolynomial::at_one() const {
    double r = 0.0;
    for (double a : coeffs) r += a;
    return r;
}

DaughterPolynomial validate_daughter(const std::vector<double>& coeffs,
                                     const std::vector<double>& powers) {
    if (coeffs.empty()) throw Error(ErrorKind::AllZero, "empty coefficient list");
    if (powers.size() != coeffs.size())
        throw Error(ErrorKind::InvalidArgument, "powers and coefficients differ in length");
    DaughterPolynomial p;
    p.coeffs = coeffs;
    p.powers = powers;
    p.degree = int(coeffs.size()) - 1;
    p.q = -1;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        if (!std::isfinite(coeffs[i]) || !std::isfinite(powers[i]) || powers[i] < 0.0)
            throw Error(ErrorKind::InvalidArgument, "bad coefficient or power");
        if (i > 0 && !(powers[i] > powers[i - 1]))
            throw Error(ErrorKind::InvalidArgument, "powers must increase");
        if (coeffs[i] != 0.0 && p.q < 0) p.q = int(i);
    }
    if (p.q < 0) throw Error(ErrorKind::AllZero, "all coefficients are zero");
    double m = 0.0;
    for (std::size_t i = 0; i < coeffs.size(); ++i) m += coeffs[i] / (powers[i] + 2.0);
    p.mass_integral = m;
    if (std::abs(m - 1.0) > 1e-12) {
        std::ostringstream os;
        os.precision(17);
        os << "mass integral of s p(s) is " << m << ", expected 1";
        throw Error(ErrorKind::MassNotNormalized, os.str());
    }
    for (int k = 0; k <= 1000; ++k)
        if (p(k / 1000.0) < 0.0) {
            p.negative_somewhere = true;
            break;
        }
    return p;
}

DaughterPolynomial validate_daughter(const std::vector<double>& coeffs) {
    std::vector<double> pw(coeffs.size());
    for (std::size_t i = 0; i < pw.size(); ++i) pw[i] = double(i);
    return validate_daughter(coeffs, pw);
}

cplx mellin_P(cplx z, const DaughterPolynomial& p, double gamma) {
    cplx r = 0.0;
    for (std::size_t i = 0; i < p.coeffs.size(); ++i) {
        if (p.coeffs[i] == 0.0) continue;
        cplx d = z + p.powers[i] / gamma;
        if (std::abs(d) < 1e-14) throw Error(ErrorKind::PoleHit, "mellin_P at a pole");
        r += p.coeffs[i] / d;
    }
    return r;
}

cplx multiplier_K(cplx z, const DaughterPolynomial& p, double gamma) {
    return mellin_P(z, p, gamma) - gamma;
}

std::vector<double> KernelFactorization::shifts() const {
    std::vector<double> s(p.powers.size());
    for (std::size_t j = 0; j < s.size(); ++j) s[j] = p.powers[j] / gamma;
    return s;
}

cplx KernelFactorization::factored_K(cplx z) const {
    cplx r = -gamma * (z - 2.0 / gamma);
    for (cplx zi : roots) r *= (z - zi);
    for (double s : shifts()) r /= (z + s);
    return r;
}

std::vector<cplx> polynomial_roots(const std::vector<double>& c) {
    // c[0] + c[1] z + ... + z^n, c[n] == 1
    const int n = int(c.size()) - 1;
    std::vector<cplx> out;
    if (n <= 0) return out;
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) C(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) C(i, n - 1) = -c[i];
    Eigen::EigenSolver<Eigen::MatrixXd> es(C, false);
    if (es.info() != Eigen::Success)
        throw Error(ErrorKind::RootFindingFailed, "companion eigenvalue solver did not converge");
    for (int i = 0; i < n; ++i) out.push_back(es.eigenvalues()(i));
    return out;
}

namespace {

std::vector<double> poly_mul_linear(const std::vector<double>& a, double r) {
    // a(z) (z + r)
    std::vector<double> o(a.size() + 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        o[i] += r * a[i];
        o[i + 1] += a[i];
    }
    return o;
}

template <class T>
T horner(const std::vector<double>& c, T z) {
    T r = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) r = r * z + c[i];
    return r;
}

}  // namespace

KernelFactorization factor_kernel(const DaughterPolynomial& p, double gamma) {
    if (!(gamma > 0.0)) throw Error(ErrorKind::InvalidArgument, "gamma must be positive");
    KernelFactorization f;
    f.p = p;
    f.gamma = gamma;
    const auto sh = f.shifts();
    const int n1 = int(sh.size());

    // R(z) = Σ a_i ∏_{j≠i}(z+s_j) − γ ∏_j (z+s_j), lowest coefficient first
    std::vector<double> R(n1 + 1, 0.0);
    {
        std::vector<double> full{1.0};
        for (double s : sh) full = poly_mul_linear(full, s);
        for (int k = 0; k <= n1; ++k) R[k] -= gamma * full[k];
    }
    for (int i = 0; i < n1; ++i) {
        if (p.coeffs[i] == 0.0) continue;
        std::vector<double> part{1.0};
        for (int j = 0; j < n1; ++j)
            if (j != i) part = poly_mul_linear(part, sh[j]);
        for (std::size_t k = 0; k < part.size(); ++k) R[k] += p.coeffs[i] * part[k];
    }
    // divide by -γ (z - 2/γ): synthetic division from the top
    const double r0 = 2.0 / gamma;
    std::vector<double> Q(n1, 0.0);
    double carry = 0.0;
    for (int k = n1; k >= 1; --k) {
        carry = R[k] + carry * r0;
        Q[k - 1] = carry;
    }
    for (double& v : Q) v /= -gamma;  // monic now

    std::vector<cplx> roots = polynomial_roots(Q);
    std::vector<double> dQ(Q.size() > 1 ? Q.size() - 1 : 1, 0.0);
    for (std::size_t k = 1; k < Q.size(); ++k) dQ[k - 1] = double(k) * Q[k];
    for (cplx& z : roots) {
        for (int it = 0; it < 3; ++it) {
            cplx d = horner(dQ, z);
            if (std::abs(d) == 0.0) break;
            z -= horner(Q, z) / d;
        }
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw Error(ErrorKind::RootFindingFailed, "Newton refinement diverged");
        if (std::abs(z.imag()) < 1e-13 * std::max(1.0, std::abs(z))) z = cplx(z.real(), 0.0);
        double scale = 1.0;
        for (double c : Q) scale = std::max(scale, std::abs(c));
        if (std::abs(horner(Q, z)) > 1e-6 * scale * std::pow(std::max(1.0, std::abs(z)), double(roots.size())))
            throw Error(ErrorKind::RootFindingFailed, "root residual too large");
    }
    // enforce conjugate closure for nonreal roots
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (roots[i].imag() <= 0.0) continue;
        std::size_t best = i;
        double bd = 1e300;
        for (std::size_t j = 0; j < roots.size(); ++j) {
            double d = std::abs(roots[j] - std::conj(roots[i]));
            if (j != i && roots[j].imag() < 0.0 && d < bd) {
                bd = d;
                best = j;
            }
        }
        if (best != i) {
            cplx avg = 0.5 * (roots[i] + std::conj(roots[best]));
            roots[i] = avg;
            roots[best] = std::conj(avg);
        }
    }
    std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) {
        return a.real() != b.real() ? a.real() > b.real() : a.imag() > b.imag();
    });
    f.roots = roots;

    double nu = 0.0;
    for (double s : sh) nu += s;
    for (cplx z : roots) nu += z.real();
    f.nu = nu;

    for (cplx z : roots) {
        if (z.real() > 1e-9) f.assumption_holds = false;
        else if (std::abs(z.real()) <= 1e-9) f.axis_warning = true;
    }
    return f;
}

}  // namespace frag
