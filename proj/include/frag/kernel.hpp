#pragma once

#include <complex>
#include <vector>

namespace frag {

using cplx = std::complex<double>;

// p(s) = Σ a_i s^{μ_i}; for an ordinary polynomial μ_i = i
struct DaughterPolynomial {
    std::vector<double> coeffs;
    std::vector<double> powers;
    int degree = 0;
    int q = 0;                    // first index with a nonzero coefficient
    double mass_integral = 0.0;   // Σ a_i/(μ_i+2)
    bool negative_somewhere = false;

    double operator()(double s) const;
    double at_one() const;
};

DaughterPolynomial validate_daughter(const std::vector<double>& coeffs);
DaughterPolynomial validate_daughter(const std::vector<double>& coeffs,
                                     const std::vector<double>& powers);

cplx mellin_P(cplx z, const DaughterPolynomial& p, double gamma);
cplx multiplier_K(cplx z, const DaughterPolynomial& p, double gamma);

struct KernelFactorization {
    DaughterPolynomial p;
    double gamma = 1.0;
    std::vector<cplx> roots;   // z_i, the roots of K other than 2/γ
    double nu = 0.0;
    bool assumption_holds = true;
    bool axis_warning = false;

    // μ_j/γ for every index j = 0..N, the shifts of the Gamma factors
    std::vector<double> shifts() const;
    // -γ (z-2/γ) ∏(z-z_i) / ∏(z+μ_j/γ)
    cplx factored_K(cplx z) const;
};

KernelFactorization factor_kernel(const DaughterPolynomial& p, double gamma);

// monic polynomial roots through the companion matrix, coefficients lowest first
std::vector<cplx> polynomial_roots(const std::vector<double>& monic_low_first);

}  // namespace frag
