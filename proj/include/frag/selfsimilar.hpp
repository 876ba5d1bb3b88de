#pragma once

#include <complex>

#include "frag/grid.hpp"
#include "frag/kernel.hpp"
#include "frag/mellin.hpp"

namespace frag {

struct SelfSimilarProfile {
    KernelFactorization fact;
    GridFunction profile;            // transformed variable, unit first moment
    double mass = 1.0;               // first moment the profile was normalized to
    double normalization = 1.0;      // unnormalized transform at 2/γ
    double tail_exponent_fit = 0.0;
    bool tail_fitted = false;
};

// Γ(z) ∏_{j≥1} Γ(z+μ_j/γ) / ∏ Γ(z-z_i), no normalization
cplx selfsimilar_mellin_raw(const KernelFactorization& fact, cplx z);
// divided by its value at 2/γ
cplx selfsimilar_mellin(const KernelFactorization& fact, cplx z);

SelfSimilarProfile selfsimilar_profile(const KernelFactorization& fact, const GridFunction& templ);

// closed form for p(s) = a0 + a1 s, unnormalized (its transform is the raw one)
double selfsimilar_linear_closed(double a0, double gamma, double x);

// least squares slope of log(u) + x against log x over the last decade
double tail_exponent(const GridFunction& profile);
double tail_exponent(const SelfSimilarProfile& p);

// residue of the raw transform at z = 0, i.e. the limit of the profile at the origin;
// with normalized = true it is divided by the raw value at 2/γ
double value_at_zero(const KernelFactorization& fact, bool normalized = false);

}  // namespace frag
