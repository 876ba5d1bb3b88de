#pragma once

#include <vector>

#include "frag/grid.hpp"
#include "frag/kernel.hpp"

namespace frag {

// Direct discretization of the transformed self-similar equation
//   u_t + L u = 0,  L u = γ x u_x + 2u - Σ a_i x^{μ_i/γ} ∫_x^∞ y^{-μ_i/γ} u dy + γ x u
// in flux form for the transport part, so the first moment is kept.
class OracleOperator {
public:
    OracleOperator(const DaughterPolynomial& p, double gamma, const GridFunction& templ);

    void apply(const std::vector<double>& u, std::vector<double>& out) const;
    // gain part only, Σ a_i g_i
    void gain(const std::vector<double>& u, std::vector<double>& out) const;
    double mass(const std::vector<double>& u) const;
    double max_stable_dt() const;  // 0.5 h / γ
    const GridFunction& grid() const { return templ_; }
    double gamma() const { return gamma_; }

private:
    DaughterPolynomial p_;
    double gamma_;
    GridFunction templ_;
    double h_;
    std::vector<double> xpow_;   // x^{2/γ}
    double ghost1_, ghost2_;     // x_{-1}^{2/γ}, x_{-2}^{2/γ}
};

struct OracleState {
    GridFunction grid;
    double time = 0.0;
    double mass = 0.0;
};

GridFunction apply_operator(const GridFunction& u, const DaughterPolynomial& p, double gamma,
                            bool check_resolution = true);
OracleState step(const OracleState& s, const DaughterPolynomial& p, double gamma, double dt);

struct OracleRunOptions {
    double cfl = 0.4;            // dt = cfl h / γ
    bool strict_mass = false;    // throw when the first moment drifts beyond 1e-6 (1+|m0|)
};

Trajectory run(const GridFunction& u0, const DaughterPolynomial& p, double gamma, double T,
               const std::vector<double>& snapshot_times, const OracleRunOptions& opt = {});

}  // namespace frag
