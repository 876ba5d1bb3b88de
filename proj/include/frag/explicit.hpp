#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "frag/grid.hpp"
#include "frag/mellin.hpp"

namespace frag {

// Integral representation for p(s) = 2 with power-law decaying data.
//
// With G_t(v) = e^{-(1-b)v} F(bv), b = e^{-γt}, the solution is
//   u(x,t) = e^{-t} D^{2/γ}[x^{1/γ} G_t](x)        (Riemann-Liouville, from 0)
// whose transform is e^{-t} G~_t(z-1/γ) Γ(1+2/γ-z)/Γ(1-z). The seed F is
// recovered from u0 by
//   F~(s) = u0~(s+1/γ) Γ(1-1/γ-s) / Γ(1+1/γ-s).
// fxt_literal keeps the older x^{-1/γ} I^{1-2/γ} form, paired with
//   F~(s) = u0~(s+1/γ) Γ(2-1/γ-s) / Γ(1+1/γ-s);
// it matches u0 at t = 0 but does not solve the equation for t > 0.

enum class SeedRelation { Corrected, Literal };

class RepresentationSeed {
public:
    virtual ~RepresentationSeed() = default;
    virtual double gamma() const = 0;
    // F(v) ~ v^β as v -> 0
    virtual double small_exponent() const = 0;
    // v^j F^{(j)}(v)
    virtual double D(int j, double v) const = 0;
    virtual cplx mellin(cplx s) const = 0;
    virtual SeedRelation relation() const = 0;
};

// F(v) = v^β e^{-v} Σ c_k v^k
class AnalyticSeed : public RepresentationSeed {
public:
    AnalyticSeed(double gamma, double beta, std::vector<double> coeffs,
                 SeedRelation rel = SeedRelation::Corrected);
    // two-term seed with c_1 chosen so the data has zero first moment
    static AnalyticSeed zero_mass(double gamma, double beta,
                                  SeedRelation rel = SeedRelation::Corrected);

    double gamma() const override { return gamma_; }
    double small_exponent() const override { return beta_; }
    double D(int j, double v) const override;
    cplx mellin(cplx s) const override;
    SeedRelation relation() const override { return rel_; }
    const std::vector<double>& coeffs() const { return c_; }

private:
    double gamma_, beta_;
    std::vector<double> c_;
    SeedRelation rel_;
};

// F recovered from sampled data by the Mellin relation; D_j are kept as grids
class GridSeed : public RepresentationSeed {
public:
    GridSeed(const GridFunction& u0, double gamma, int jmax,
             SeedRelation rel = SeedRelation::Corrected);

    double gamma() const override { return gamma_; }
    double small_exponent() const override { return beta_; }
    double D(int j, double v) const override;
    cplx mellin(cplx s) const override;
    SeedRelation relation() const override { return rel_; }
    double contour() const { return zeta0_; }  // Re of the u0~ line used

private:
    cplx u0_transform(cplx zeta) const;

    GridFunction u0_;
    double gamma_;
    SeedRelation rel_;
    double beta_ = 0.0;
    double zeta0_ = 0.5, zetaL_ = 0.5;
    bool use_left_ = false;
    std::vector<GridFunction> main_, left_;
    std::vector<GridSampler> smain_, sleft_;
    mutable std::mutex mu_;
    mutable std::map<std::pair<double, double>, cplx> cache_;
};

struct RepresentationOptions {
    int nodes_start = 16;
    int nodes_max = 256;
    double tol = 1e-8;
};

// m = floor(2/γ)+1; u = e^{-t}/Γ(m-2/γ) ∫_0^1 ψ^{(m)}(xw) w^{2/γ} (1-w)^{m-1-2/γ} dw,
// ψ(v) = v^{m-1/γ} G_t(v)
double representation_value(const RepresentationSeed& s, double x, double t,
                            const RepresentationOptions& opt = {});
GridFunction representation_grid(const RepresentationSeed& s, const GridFunction& templ, double t,
                                 const RepresentationOptions& opt = {});
// highest derivative order used, floor(2/γ)+1
int representation_order(double gamma);

// e^{-t} x^{-1/γ}/Γ(1-2/γ) ∫_0^1 G_t(xw) w^{1/γ} (1-w)^{-2/γ} dw, γ > 2
double fxt_literal(const RepresentationSeed& s, double x, double t,
                   const RepresentationOptions& opt = {});
// the fragmentation term of the above as written alongside it:
// -γ x^{1-1/γ} e^{-t}/Γ(1-2/γ) ∫_0^1 G_t(xw) w^{1/γ+1} (1-w)^{-2/γ} dw
double literal_fragmentation_term(const RepresentationSeed& s, double x, double t,
                                  const RepresentationOptions& opt = {});

struct SlowModeSplit {
    std::vector<double> coeffs;  // a_1..a_J on U_1..U_J
    GridFunction u_star;
};

// γ <= 1: subtract Σ a_n U_n so that u*~ vanishes at 2/γ-j, j = 1..[2/γ]-1
SlowModeSplit remove_slow_modes(const GridFunction& u0, double gamma);

enum class ExplicitBranch { Primary, Midrange, SlowMode };
const char* branch_name(ExplicitBranch b);
ExplicitBranch branch_for(double gamma);

class ExplicitSolver {
public:
    ExplicitSolver(const GridFunction& u0, double gamma);

    ExplicitBranch branch() const { return branch_; }
    const std::vector<double>& slow_coeffs() const { return slow_; }
    const RepresentationSeed& seed() const { return *seed_; }

    double value(double x, double t) const;
    GridFunction snapshot(double t) const;
    Trajectory run(const std::vector<double>& times) const;

private:
    GridFunction u0_;
    double gamma_;
    ExplicitBranch branch_;
    std::vector<double> slow_;
    std::unique_ptr<GridSeed> seed_;
};

// γ > 2 only (BranchUnsupported otherwise)
double explicit_solution(const GridFunction& u0, double gamma, double t, double x);
// γ in (1, 2]
double explicit_solution_midrange(const GridFunction& u0, double gamma, double t, double x);

}  // namespace frag
