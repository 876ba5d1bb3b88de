#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "frag/error.hpp"
#include "frag/evolution.hpp"
#include "frag/explicit.hpp"
#include "frag/kernel.hpp"
#include "frag/mellin.hpp"
#include "frag/oracle.hpp"
#include "frag/specfun.hpp"

using namespace frag;

namespace {

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error thrown");
    return ErrorKind::InvalidArgument;
}

const GridFunction& grid() {
    static GridFunction g = make_log_grid(1e-12, 1e2, 4096);
    return g;
}

std::vector<double> range(double a, double b, double h) {
    std::vector<double> t;
    for (int i = 0; a + i * h <= b + 1e-12; ++i) t.push_back(a + i * h);
    return t;
}

}  // namespace

TEST_CASE("eigenfunction examples") {
    CHECK(eigenfunction(1, 2.0, 0, 1.0) == doctest::Approx(0.0).scale(1.0));
    CHECK(eigenfunction(1, 2.0, 0, 0.3) == doctest::Approx(0.7 * std::exp(-0.3)));
    // U_n = n! L_n^{(2/γ-n)} e^{-x}
    CHECK(eigenfunction(3, 0.8, 0, 1.7) ==
          doctest::Approx(6.0 * laguerre(3, 2.5 - 3.0, 1.7) * std::exp(-1.7)));
    // degenerate shift q
    CHECK(eigenfunction(2, 1.0, 1, 0.9) ==
          doctest::Approx(2.0 * 0.9 * laguerre(2, 3.0 - 2.0, 0.9) * std::exp(-0.9)));
}

TEST_CASE("eigenfunctions carry zero mass") {
    for (double g : {1.0, 2.0})
        for (int n = 1; n <= 6; ++n) {
            auto U = eigenfunction_grid(n, g, 0, grid());
            CHECK(std::abs(first_moment(U, g)) < 1e-8);
        }
}

TEST_CASE("eigen relation under the direct operator") {
    auto g8 = make_log_grid(1e-12, 1e2, 8192);
    auto p = validate_daughter({2.0});
    for (double g : {1.0, 2.0})
        for (int n = 1; n <= 4; ++n) {
            auto U = eigenfunction_grid(n, g, 0, g8);
            auto LU = apply_operator(U, p, g);
            CHECK(l2_distance(LU, scaled(U, n * g)) < 1e-3 * n * g * l2_norm(U));
        }
}

TEST_CASE("power-law eigenfunction decays algebraically") {
    // algebraic decay set by the nearest right pole of the transform, z = 2/γ+1
    const double g = 0.8;
    double a = eigenfunction(1, g, 0, 200.0, EigenBranch::PowerLaw);
    double b = eigenfunction(1, g, 0, 2000.0, EigenBranch::PowerLaw);
    double slope = std::log(std::abs(b / a)) / std::log(10.0);
    CHECK(slope == doctest::Approx(-(2.0 / g + 1.0)).epsilon(0.02));
}

TEST_CASE("spectrum summary examples") {
    auto s2 = spectrum_summary(2.0, 0.0, 4);
    CHECK(s2.discrete == std::vector<double>{2.0, 4.0, 6.0, 8.0});
    CHECK(s2.crossing_index == 1);
    CHECK(s2.slow_count == 0);

    auto s4 = spectrum_summary(0.4, 0.0, 5);
    CHECK(s4.discrete[0] == doctest::Approx(0.4));
    CHECK(s4.discrete[2] == doctest::Approx(1.2));
    CHECK(s4.slow_count == 2);
    CHECK(s4.crossing_index == 3);

    auto s1 = spectrum_summary(1.0, -0.5, 3);
    CHECK(s1.discrete[0] == s1.continuous_abscissa);
    CHECK(s1.continuous_abscissa_shifted == doctest::Approx(1.5));
    CHECK(std::is_sorted(s1.discrete.begin(), s1.discrete.end()));
}

TEST_CASE("projection of eigenmodes") {
    auto U1 = eigenfunction_grid(1, 2.0, 0, grid());
    auto s = project_initial(U1, 2.0, 0, 8);
    REQUIRE(s.size() >= 1);
    CHECK(s.coeffs[0] == doctest::Approx(1.0).epsilon(1e-8));
    for (int n = 1; n < s.size(); ++n) CHECK(std::abs(s.coeffs[n]) < 1e-8);

    auto U3 = eigenfunction_grid(3, 2.0, 0, grid());
    auto s3 = project_initial(axpy(0.5, U3, U1), 2.0, 0, 8);
    CHECK(s3.coeffs[0] == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(s3.coeffs[2] == doctest::Approx(0.5).epsilon(1e-7));
    CHECK(std::abs(s3.coeffs[1]) < 1e-7);
    for (int n = 3; n < s3.size(); ++n) CHECK(std::abs(s3.coeffs[n]) < 1e-7);
}

TEST_CASE("projection round trip for a zero-mass bump at gamma = 2") {
    // x^2 e^{-x} - c x e^{-x}, first moment ∫ u dx = 2 - c
    auto u0 = sample_on(grid(), [](double x) { return (x * x - 2.0 * x) * std::exp(-x); });
    auto s = project_initial(u0, 2.0, 0, 16);
    for (double a : s.coeffs) CHECK(std::isfinite(a));
    auto back = evaluate_series_grid(s, grid(), 0.0);
    CHECK(l2_distance(back, u0) < 1e-6);
}

TEST_CASE("projection with a fractional part in 2/gamma") {
    // γ = 0.8: 2/γ = 2.5, the reduction goes through the upper fractional integral
    const double g = 0.8;
    auto U1 = eigenfunction_grid(1, g, 0, grid());
    auto U2 = eigenfunction_grid(2, g, 0, grid());
    auto s = project_initial(axpy(0.25, U2, U1), g, 0, 6);
    CHECK(s.coeffs[0] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(s.coeffs[1] == doctest::Approx(0.25).epsilon(1e-6));
}

TEST_CASE("projection rejects data with mass") {
    auto e = sample_on(grid(), [](double x) { return std::exp(-x); });
    CHECK(kind_of([&] { project_initial(e, 1.0, 0, 8); }) == ErrorKind::NotZeroMass);
}

TEST_CASE("series evaluation examples") {
    auto s = make_series(2.0, 0, {1.0});
    for (double x : {0.1, 1.0, 3.0}) {
        CHECK(evaluate_series(s, x, 0.0) == doctest::Approx(eigenfunction(1, 2.0, 0, x)));
        CHECK(evaluate_series(s, x, 1.0) == doctest::Approx(std::exp(-2.0) * eigenfunction(1, 2.0, 0, x)));
    }
    CHECK(std::abs(evaluate_series(s, 1.0, 1.0)) < 1e-15);
}

TEST_CASE("two-mode decay and decay_rate") {
    auto s = make_series(1.0, 0, {1.0, 0.3});
    auto tr = evolve_series(s, grid(), range(0.0, 6.0, 0.25));
    CHECK(std::abs(decay_rate(tr, 2.0, 5.0) + 1.0) < 0.01);
    CHECK(std::abs(decay_rate(tr, 3.0, 6.0) + 1.0) < 0.01);
    for (std::size_t i = 0; i < tr.snapshots.size(); ++i)
        CHECK(std::abs(first_moment(tr.snapshots[i], 1.0)) < 1e-6 * std::max(tr.norms[i], 1e-300) + 1e-14);

    auto one = make_series(2.0, 0, {1.0});
    auto t1 = evolve_series(one, grid(), range(0.0, 3.0, 0.5));
    CHECK(decay_rate(t1, 0.0, 3.0) == doctest::Approx(-2.0).epsilon(1e-6));

    CHECK(kind_of([&] { decay_rate(t1, 0.0, 1.0); }) == ErrorKind::WindowTooShort);
    auto zero = make_series(2.0, 0, {0.0});
    auto tz = evolve_series(zero, grid(), range(0.0, 3.0, 0.5));
    CHECK(kind_of([&] { decay_rate(tz, 0.0, 3.0); }) == ErrorKind::WindowTooShort);
}

TEST_CASE("series eigen decay is exact for each mode") {
    for (double g : {0.5, 1.0, 2.0, 3.0})
        for (int n = 1; n <= 5; ++n) {
            std::vector<double> c(n, 0.0);
            c[n - 1] = 1.0;
            auto s = make_series(g, 0, c);
            double a = evaluate_series(s, 0.7, 0.0), b = evaluate_series(s, 0.7, 1.0);
            if (std::abs(a) > 1e-12) CHECK(b / a == doctest::Approx(std::exp(-n * g)).epsilon(1e-12));
        }
}

TEST_CASE("pointwise bound with a constant fitted at t = 1") {
    auto u0 = sample_on(grid(), [](double x) { return (x * x - 2.0 * x) * std::exp(-x); });
    const double g = 2.0;
    auto s = project_initial(u0, g, 0, 16);
    auto weighted_max = [&](double t) {
        auto u = evaluate_series_grid(s, grid(), t);
        double m = 0.0;
        for (std::size_t i = 0; i < grid().size(); ++i)
            if (grid().xs[i] < 60.0) m = std::max(m, std::abs(u.values[i]) * std::exp(0.75 * grid().xs[i]));
        return m;
    };
    const double C = weighted_max(1.0) * std::exp(g);
    for (double t : {2.0, 3.0}) CHECK(weighted_max(t) <= C * std::exp(-g * t) * (1.0 + 1e-9));
}

TEST_CASE("evolve_general with the constant kernel equals the series path") {
    auto f = factor_kernel(validate_daughter({2.0}), 1.0);
    auto u0 = sample_on(grid(), [](double x) { return (x - 2.0) * std::exp(-x); });
    auto times = std::vector<double>{0.0, 0.5, 1.0};
    auto a = evolve_general(u0, f, times);
    auto s = project_initial(u0, 1.0, 0, 16);
    for (std::size_t i = 0; i < times.size(); ++i)
        CHECK(l2_distance(a.snapshots[i], evaluate_series_grid(s, grid(), times[i])) < 1e-8);

    auto z = evolve_general(grid().zeros_like(), f, times);
    for (const auto& snap : z.snapshots)
        CHECK(*std::max_element(snap.values.begin(), snap.values.end(),
                                [](double x, double y) { return std::abs(x) < std::abs(y); }) == 0.0);
}

TEST_CASE("transfer multiplier of the linear kernel") {
    auto f = factor_kernel(validate_daughter({3.0, -1.5}), 1.0);
    cplx z(0.8, 2.0);
    cplx ref = gamma_fn(z + 1.5) / gamma_fn(z + 1.0);
    CHECK(std::abs(transfer_multiplier(f, z) - ref) < 1e-12 * std::abs(ref));
}

TEST_CASE("relative mass") {
    auto U = eigenfunction_grid(1, 1.0, 0, grid());
    CHECK(relative_mass(U, 1.0) < 1e-8);
    auto e = sample_on(grid(), [](double x) { return std::exp(-x); });
    CHECK(relative_mass(e, 1.0) == doctest::Approx(1.0));
}

// ---------------------------------------------------------------- explicit representation

TEST_CASE("branch dispatch") {
    CHECK(branch_for(3.0) == ExplicitBranch::Primary);
    CHECK(branch_for(2.0) == ExplicitBranch::Midrange);
    CHECK(branch_for(1.2) == ExplicitBranch::Midrange);
    CHECK(branch_for(1.0) == ExplicitBranch::SlowMode);
    CHECK(branch_for(0.5) == ExplicitBranch::SlowMode);
    CHECK(std::string(branch_name(ExplicitBranch::Midrange)) == "midrange");
    CHECK(representation_order(3.0) == 1);
    CHECK(representation_order(1.5) == 2);
    CHECK(representation_order(0.5) == 5);
}

TEST_CASE("analytic seed data reproduces itself at t = 0") {
    auto g6 = make_log_grid(1e-12, 1e6, 4096);
    AnalyticSeed seed = AnalyticSeed::zero_mass(3.0, 0.3);
    auto u0 = representation_grid(seed, g6, 0.0);
    CHECK(std::abs(first_moment(u0, 3.0)) < 1e-6 * l2_norm(u0, 2.0 / 3.0 - 1.0) + 1e-10);

    ExplicitSolver ex(u0, 3.0);
    CHECK(ex.branch() == ExplicitBranch::Primary);
    CHECK(l2_distance(ex.snapshot(0.0), u0) < 1e-4 * l2_norm(u0));
    double x = g6.xs[2000];
    CHECK(explicit_solution(u0, 3.0, 0.0, x) == doctest::Approx(u0.values[2000]).epsilon(1e-4));
}

TEST_CASE("both seed relations reproduce the data at t = 0") {
    const double g = 3.0;
    auto g6 = make_log_grid(1e-12, 1e6, 4096);
    auto u0 = representation_grid(AnalyticSeed::zero_mass(g, 0.3), g6, 0.0);
    GridSeed lit(u0, g, representation_order(g), SeedRelation::Literal);
    GridSeed cor(u0, g, representation_order(g), SeedRelation::Corrected);
    for (std::size_t i : {1200u, 2000u, 2600u}) {
        double x = g6.xs[i];
        CHECK(fxt_literal(lit, x, 0.0) == doctest::Approx(u0.values[i]).epsilon(1e-5).scale(1e-6));
        CHECK(representation_value(cor, x, 0.0) == doctest::Approx(u0.values[i]).epsilon(1e-5).scale(1e-6));
    }
    // away from t = 0 the two differ
    double x = g6.xs[2000];
    CHECK(std::abs(fxt_literal(lit, x, 0.5) - representation_value(cor, x, 0.5)) > 1e-4);
}

TEST_CASE("explicit branches reject the wrong gamma") {
    auto g6 = make_log_grid(1e-12, 1e6, 2048);
    auto u0 = representation_grid(AnalyticSeed::zero_mass(1.5, 0.3), g6, 0.0);
    CHECK(kind_of([&] { explicit_solution(u0, 1.5, 0.1, 1.0); }) == ErrorKind::BranchUnsupported);
    auto u3 = representation_grid(AnalyticSeed::zero_mass(3.0, 0.3), g6, 0.0);
    CHECK(kind_of([&] { explicit_solution_midrange(u3, 3.0, 0.1, 1.0); }) == ErrorKind::BranchUnsupported);
}

TEST_CASE("midrange branch round trip and rate") {
    const double g = 1.5;
    auto g6 = make_log_grid(1e-12, 1e6, 4096);
    auto u0 = representation_grid(AnalyticSeed::zero_mass(g, 0.005), g6, 0.0);
    ExplicitSolver ex(u0, g);
    CHECK(ex.branch() == ExplicitBranch::Midrange);
    CHECK(l2_distance(ex.snapshot(0.0), u0) < 1e-4 * l2_norm(u0));
    double x = g6.xs[1500];
    CHECK(explicit_solution_midrange(u0, g, 0.0, x) == doctest::Approx(u0.values[1500]).epsilon(1e-4));
    auto tr = ex.run(range(0.0, 4.0, 0.5));
    CHECK(std::abs(decay_rate(tr, 1.0, 4.0) + 1.0) < 0.03);
}

TEST_CASE("slow modes") {
    const double g = 0.8;
    auto U1 = eigenfunction_grid(1, g, 0, grid());
    auto sp = remove_slow_modes(U1, g);
    REQUIRE(sp.coeffs.size() == 1);
    CHECK(sp.coeffs[0] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(l2_norm(sp.u_star) < 1e-6 * l2_norm(U1));

    // u~0(2/γ-1) = 0 gives a1 = 0: U2 has that property
    auto U2 = eigenfunction_grid(2, g, 0, grid());
    CHECK(std::abs(forward(U2, 2.0 / g - 1.0)) < 1e-10);
    CHECK(std::abs(remove_slow_modes(U2, g).coeffs[0]) < 1e-8);
}

TEST_CASE("slow-mode split reassembles the data at gamma = 0.5") {
    const double g = 0.5;
    // (x - c) x e^{-x} with zero first moment: ∫ x^3 (x - c) e^{-x} dx = 24 - 6c
    auto u0 = sample_on(grid(), [](double x) { return (x - 4.0) * x * std::exp(-x); });
    auto sp = remove_slow_modes(u0, g);
    REQUIRE(sp.coeffs.size() == 3);
    GridFunction sum = sp.u_star;
    for (std::size_t n = 0; n < sp.coeffs.size(); ++n)
        sum = axpy(sp.coeffs[n], eigenfunction_grid(int(n) + 1, g, 0, grid()), sum);
    CHECK(l2_distance(sum, u0) < 1e-5);
    // the remainder has no poles left at 2/γ - j
    for (int j = 1; j <= 3; ++j) CHECK(std::abs(forward(sp.u_star, 2.0 / g - j)) < 1e-8);
}

TEST_CASE("slow-mode path needs finite moments") {
    auto g6 = make_log_grid(1e-12, 1e6, 2048);
    // tail x^{-2}: ∫ x^{2/γ-j-1} u diverges for the first j at γ = 0.5
    auto u0 = sample_on(g6, [](double x) { return (1.0 - 2.0 * x) / std::pow(1.0 + x, 4.0); });
    CHECK(kind_of([&] { remove_slow_modes(u0, 0.5); }) == ErrorKind::MomentDiverges);
}

TEST_CASE("explicit solver rejects data with mass") {
    auto g6 = make_log_grid(1e-12, 1e6, 2048);
    auto u0 = sample_on(g6, [](double x) { return std::exp(-x); });
    CHECK(kind_of([&] { ExplicitSolver(u0, 3.0); }) == ErrorKind::NotZeroMass);
}
