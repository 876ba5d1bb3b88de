#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "frag/error.hpp"
#include "frag/evolution.hpp"
#include "frag/explicit.hpp"
#include "frag/kernel.hpp"
#include "frag/oracle.hpp"
#include "frag/selfsimilar.hpp"

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

double slope(const std::vector<double>& t, const std::vector<double>& y) {
    const double n = double(t.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        double ly = std::log(y[i]);
        sx += t[i], sy += ly, sxx += t[i] * t[i], sxy += t[i] * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST_CASE("operator on zero and on an eigenmode") {
    auto p = validate_daughter({2.0});
    auto z = apply_operator(grid().zeros_like(), p, 1.0);
    CHECK(*std::max_element(z.values.begin(), z.values.end()) == 0.0);
    CHECK(*std::min_element(z.values.begin(), z.values.end()) == 0.0);

    auto g8 = make_log_grid(1e-12, 1e2, 8192);
    auto U1 = eigenfunction_grid(1, 1.0, 0, g8);
    auto LU = apply_operator(U1, p, 1.0);
    CHECK(l2_distance(LU, U1) < 1e-3 * l2_norm(U1));
}

TEST_CASE("CFL guard fires before the state changes") {
    auto p = validate_daughter({2.0});
    OracleState s{eigenfunction_grid(1, 1.0, 0, grid()), 0.0, 0.0};
    OracleOperator op(p, 1.0, grid());
    const double bound = op.max_stable_dt();
    CHECK(bound == doctest::Approx(0.5 * grid().log_step()));
    auto before = s.grid.values;
    CHECK(kind_of([&] { step(s, p, 1.0, 2.0 * bound); }) == ErrorKind::CFLViolation);
    CHECK(s.grid.values == before);
    CHECK_NOTHROW(step(s, p, 1.0, 0.5 * bound));
}

TEST_CASE("eigen decay over unit time") {
    auto p = validate_daughter({2.0});
    auto U1 = eigenfunction_grid(1, 2.0, 0, grid());
    auto tr = run(U1, p, 2.0, 1.0, {0.0, 1.0});
    REQUIRE(tr.norms.size() == 2);
    CHECK(std::abs(tr.norms[1] / tr.norms[0] - std::exp(-2.0)) < 1e-3 * std::exp(-2.0));
}

TEST_CASE("self-similar profile is a fixed point") {
    auto p = validate_daughter({2.0});
    auto uS = selfsimilar_profile(factor_kernel(p, 1.0), grid()).profile;
    auto tr = run(uS, p, 1.0, 5.0, {0.0, 5.0});
    CHECK(l2_distance(tr.snapshots.back(), uS) < 1e-5 * 5.0);
    CHECK(std::abs(tr.masses.back() - tr.masses.front()) < 1e-6 * (1.0 + std::abs(tr.masses.front())));
}

TEST_CASE("convergence to the profile at rate gamma") {
    auto p = validate_daughter({2.0});
    auto uS = selfsimilar_profile(factor_kernel(p, 1.0), grid()).profile;
    auto U1 = eigenfunction_grid(1, 1.0, 0, grid());
    auto u0 = axpy(0.1, U1, uS);
    std::vector<double> ts{2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0};
    auto tr = run(u0, p, 1.0, 5.0, ts);
    std::vector<double> d;
    for (const auto& s : tr.snapshots) d.push_back(l2_distance(s, uS));
    CHECK(std::abs(slope(tr.times, d) + 1.0) < 0.03);
}

TEST_CASE("mass conservation and positivity for generic positive data") {
    auto p = validate_daughter({3.0, -1.5});
    auto u0 = sample_on(grid(), [](double x) { return x * x * std::exp(-0.7 * x) + std::exp(-3.0 * x); });
    OracleRunOptions o;
    o.strict_mass = true;
    Trajectory tr;
    CHECK_NOTHROW(tr = run(u0, p, 1.0, 3.0, {0.0, 1.0, 2.0, 3.0}, o));
    for (double m : tr.masses) CHECK(std::abs(m - tr.masses[0]) < 1e-6 * std::abs(tr.masses[0]));
    for (const auto& s : tr.snapshots) {
        double mx = *std::max_element(s.values.begin(), s.values.end());
        CHECK(*std::min_element(s.values.begin(), s.values.end()) >= -1e-10 * mx);
    }
}

TEST_CASE("residual drops under grid refinement") {
    auto p = validate_daughter({3.0, -1.5});
    auto f = factor_kernel(p, 1.0);
    double prev = 0.0;
    for (std::size_t n : {2048u, 4096u, 8192u}) {
        auto g = make_log_grid(1e-12, 1e2, n);
        auto uS = selfsimilar_profile(f, g).profile;
        double r = l2_norm(apply_operator(uS, p, 1.0)) / l2_norm(uS);
        if (prev > 0.0) CHECK(prev / r >= 3.0);
        prev = r;
    }
}

TEST_CASE("oracle against the series path") {
    auto p = validate_daughter({2.0});
    for (double g : {1.0, 2.0}) {
        auto u0 = eigenfunction_grid(1, g, 0, grid());
        auto u2 = eigenfunction_grid(2, g, 0, grid());
        u0 = axpy(0.3, u2, u0);
        auto s = make_series(g, 0, {1.0, 0.3});
        auto tr = run(u0, p, g, 2.0, {0.5, 1.0, 2.0});
        const double n0 = l2_norm(u0);
        for (std::size_t i = 0; i < tr.times.size(); ++i) {
            auto ref = evaluate_series_grid(s, grid(), tr.times[i]);
            CHECK(l2_distance(tr.snapshots[i], ref) < 1e-3 * n0);
        }
    }
}

TEST_CASE("oracle against the explicit formula for power-law data") {
    const double g = 3.0;
    auto grid6 = make_log_grid(1e-12, 1e6, 8192);
    AnalyticSeed seed = AnalyticSeed::zero_mass(g, 0.3);
    auto u0 = representation_grid(seed, grid6, 0.0);
    auto tr = run(u0, validate_daughter({2.0}), g, 0.5, {0.5});
    ExplicitSolver ex(u0, g);
    auto ref = ex.snapshot(0.5);
    CHECK(l2_distance(tr.snapshots[0], ref) < 1e-3 * l2_norm(u0));
}
