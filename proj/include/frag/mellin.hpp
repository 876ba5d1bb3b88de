#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "frag/grid.hpp"

namespace frag {

using cplx = std::complex<double>;
using MellinFn = std::function<cplx(cplx)>;

struct ContourSamples {
    double delta = 0.5;
    std::vector<double> lambdas;  // symmetric about zero, uniform
    std::vector<cplx> values;
};

struct ForwardResult {
    cplx value;
    double error_estimate = 0.0;
};

// ∫ x^{z-1} f dx, trapezoid in log x with power-law end corrections
ForwardResult forward_est(const GridFunction& f, cplx z);
cplx forward(const GridFunction& f, cplx z);
// transformed-variable first moment ∫ x^{2/γ-1} u dx
double first_moment(const GridFunction& u, double gamma);

ContourSamples forward_contour(const GridFunction& f, double delta, double lambda_max,
                               double dlambda = 0.05);
ContourSamples sample_contour(const MellinFn& F, double delta, double lambda_max,
                              double dlambda = 0.05);

struct InverseOptions {
    double delta = 0.5;
    double dlambda = 0.05;
    double lambda_start = 16.0;
    double lambda_cap = 2048.0;
    double tail_rel = 1e-9;
    int filter_order = 0;      // 0: none; p: factor exp(-(2λ/Λ)^{2p})
    bool saddle = false;       // move the line right for large x (see mellin.cpp for the levels)
    bool assume_real = true;
};

struct InverseReport {
    double lambda_max = 0.0;
    double max_imag_residue = 0.0;
    double tail_slope = 0.0;
    bool filtered = false;
};

// (1/2π) ∫ x^{-δ-iλ} F dλ over the given samples, real part; imaginary part
// goes to *imag when requested
double inverse(const ContourSamples& F, double x, double* imag = nullptr);

GridFunction inverse_on_grid(const MellinFn& F, const GridFunction& templ,
                             const InverseOptions& opt = {}, InverseReport* rep = nullptr);
double inverse_at(const MellinFn& F, double x, const InverseOptions& opt = {},
                  InverseReport* rep = nullptr);

struct PlancherelResult {
    double contour_side = 0.0;  // sqrt of (1/2π) ∫ |f~(1/2+iλ)|^2 dλ
    double direct_side = 0.0;   // sqrt of ∫ |f|^2 dx
    double mismatch = 0.0;      // relative
};

PlancherelResult plancherel(const GridFunction& f);
double plancherel_norm(const GridFunction& f);

// g~ = F f~ along Re z = δ
GridFunction apply_multiplier(const MellinFn& F, const GridFunction& f, double delta,
                              const InverseOptions& opt = {}, InverseReport* rep = nullptr);

}  // namespace frag
