#pragma once

#include <string>
#include <vector>

#include "frag/grid.hpp"
#include "frag/kernel.hpp"

namespace frag {

enum class EigenBranch { Exponential, PowerLaw };

// exponential: U_n = n! x^{q/γ} L_n^{(κ-n)}(x) e^{-x}, κ = (q+2)/γ
// power law:   W_n with transform Γ(z-2/γ+n) Γ(2/γ+1-z) / Γ(1-z)
double eigenfunction(int n, double gamma, int q, double x,
                     EigenBranch branch = EigenBranch::Exponential);
GridFunction eigenfunction_grid(int n, double gamma, int q, const GridFunction& templ,
                                EigenBranch branch = EigenBranch::Exponential);

struct SpectrumSummary {
    double gamma = 1.0;
    double nu = 0.0;
    std::vector<double> discrete;
    double continuous_abscissa = 1.0;
    double continuous_abscissa_shifted = 1.0;  // 1 - ν
    int crossing_index = 1;                    // smallest n with nγ > 1
    int slow_count = 0;                        // eigenvalues nγ <= 1
};

SpectrumSummary spectrum_summary(double gamma, double nu, int n_max);

struct LaguerreSeries {
    double gamma = 1.0;
    int q = 0;
    double kappa = 2.0;   // (q+2)/γ
    int k = 2;            // integer part of κ
    double delta = 0.0;   // fractional part of κ
    std::vector<double> coeffs;  // a_1..a_N
    double truncation_error_estimate = 0.0;
    bool truncated_by_cap = false;
    double gevrey_C = 0.0;
    double gevrey_rho = 0.0;
    bool gevrey_ok = true;
    double scale = 1.0;   // Σ |a_n| n!

    int size() const { return int(coeffs.size()); }
};

struct ProjectionOptions {
    double t_min = 0.0;
    double rel_tol = 1e-12;
    int cap = 64;
    int j_max = 160;
    double alpha_floor = 1e-13;
    double mass_tol = 1e-6;
};

LaguerreSeries project_initial(const GridFunction& u0, double gamma, int q, int n_max,
                               const ProjectionOptions& opt = {});
LaguerreSeries make_series(double gamma, int q, const std::vector<double>& coeffs);

double evaluate_series(const LaguerreSeries& s, double x, double t);
GridFunction evaluate_series_grid(const LaguerreSeries& s, const GridFunction& templ, double t);
Trajectory evolve_series(const LaguerreSeries& s, const GridFunction& templ,
                         const std::vector<double>& times);

// ∏Γ(z-z_i) / ∏_{i≥1} Γ(z+μ_i/γ)
cplx transfer_multiplier(const KernelFactorization& fact, cplx z);

Trajectory evolve_general(const GridFunction& u0, const KernelFactorization& fact,
                          const std::vector<double>& times, const ProjectionOptions& opt = {});

// least squares slope of log norm against t over snapshots inside [t0, t1]
double decay_rate(const Trajectory& traj, double t0, double t1);

// |∫ x^{2/γ-1} u dx| relative to ∫ x^{2/γ-1} |u| dx
double relative_mass(const GridFunction& u, double gamma);

}  // namespace frag
