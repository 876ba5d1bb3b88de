#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "frag/grid.hpp"

namespace frag {

using cplx = std::complex<double>;

// principal branch
cplx log_gamma(cplx z);
// same value up to a multiple of 2πi; cheaper, meant for exp()
cplx log_gamma_fast(cplx z);
cplx gamma_fn(cplx z);
// 1/Γ(z), entire
cplx rgamma(cplx z);

// ∏Γ(z+num_i) / ∏Γ(z+den_i)
struct GammaRatioSpec {
    std::vector<cplx> shifts_num;
    std::vector<cplx> shifts_den;
};

cplx gamma_ratio(cplx z, const GammaRatioSpec& spec);
cplx log_gamma_ratio(cplx z, const GammaRatioSpec& spec);

double kummer_M(double a, double b, double x);
double kummer_M_series(double a, double b, double x);
double kummer_M_asymptotic(double a, double b, double x);  // x > 0 large

double laguerre(int n, double alpha, double x);
// L_0..L_nmax at one point
std::vector<double> laguerre_all(int nmax, double alpha, double x);

// nodes/weights on [0,1] for weight (1-w)^a w^b
struct QuadRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

std::shared_ptr<const QuadRule> gauss_jacobi01(int n, double a, double b);
// plain rule on [-1,1] for weight (1-t)^alpha (1+t)^beta
QuadRule gauss_jacobi(int n, double alpha, double beta);

enum class FracDirection { Lower, Upper };

// Lower: (1/Γ(ν)) ∫_0^x (x-y)^{ν-1} f(y) dy
// Upper: (1/(x^ν Γ(ν))) ∫_x^∞ (1-x/y)^{ν-1} y^{ν-1} f(y) dy
GridFunction fractional_integral(double nu, const GridFunction& f, FracDirection dir);

double binomial(double n, double k);
// x (x-1) ... (x-k+1)
double falling(double x, int k);
// x (x+1) ... (x+k-1)
double rising(double x, int k);
double factorial(int n);

}  // namespace frag
