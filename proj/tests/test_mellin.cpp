#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "frag/error.hpp"
#include "frag/kernel.hpp"
#include "frag/mellin.hpp"
#include "frag/selfsimilar.hpp"
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
    static GridFunction g = make_log_grid(1e-12, 1e2, 8192);
    return g;
}

GridFunction sample(double (*f)(double)) { return sample_on(grid(), f); }

}  // namespace

TEST_CASE("grid helpers") {
    auto g = make_log_grid(1e-4, 1e2, 4096);
    CHECK(g.size() == 4096);
    CHECK(g.xmin() == doctest::Approx(1e-4));
    CHECK(g.xmax() == doctest::Approx(1e2));
    CHECK_NOTHROW(check_grid(g));
    auto bad = g;
    bad.xs[10] *= 1.001;
    CHECK(kind_of([&] { check_grid(bad); }) == ErrorKind::InvalidArgument);
    auto narrow = make_log_grid(1e-2, 1e2, 512);
    CHECK(kind_of([&] { check_grid(narrow); }) == ErrorKind::InvalidArgument);
    CHECK_NOTHROW(check_grid(narrow, false));
    auto nan = g;
    nan.values[3] = std::nan("");
    CHECK(kind_of([&] { check_grid(nan); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("forward transform table entries") {
    auto e = sample([](double x) { return std::exp(-x); });
    CHECK(std::abs(forward(e, 3.0) - cplx(2.0)) < 1e-8);
    auto h = sample([](double x) { return std::pow(x, 1.5) * std::exp(-x); });
    CHECK(std::abs(forward(h, 2.0) - cplx(std::tgamma(3.5))) < 1e-8);
    CHECK(std::tgamma(3.5) == doctest::Approx(3.323351).epsilon(1e-6));

    // complex z: Γ(z)
    cplx z(1.3, 4.0);
    CHECK(std::abs(forward(e, z) - gamma_fn(z)) < 1e-8);

    // error estimate is small and reported
    auto fr = forward_est(e, 3.0);
    CHECK(fr.error_estimate < 1e-8);
}

TEST_CASE("Beta entry: (1-x)^{nu-1}/Gamma(nu) on (0,1)") {
    // the (1-x)^{ν-1} endpoint caps trapezoid accuracy well above 1e-8 for small ν,
    // so the grid check uses ν >= 4
    auto g = make_log_grid(1e-12, 1.0, 8192);
    for (double nu : {4.0, 5.5}) {
        auto f = sample_on(g, [nu](double x) { return std::pow(1.0 - x, nu - 1.0) / std::tgamma(nu); });
        for (cplx z : {cplx(2.0), cplx(0.7, 3.0)}) {
            cplx ref = std::exp(log_gamma(z) - log_gamma(z + nu));
            CHECK(std::abs(forward(f, z) - ref) < 1e-8);
        }
    }
    CHECK(std::tgamma(2.0) / std::tgamma(2.5) == doctest::Approx(0.752253).epsilon(1e-6));
}

TEST_CASE("forward rejects integrands that do not decay") {
    auto f = sample([](double x) { return std::pow(x, -0.7); });
    CHECK(kind_of([&] { forward(f, 0.5); }) == ErrorKind::StripViolation);
    auto e = sample([](double x) { return std::exp(-x); });
    CHECK(kind_of([&] { forward(e, -0.5); }) == ErrorKind::StripViolation);
}

TEST_CASE("inverse examples") {
    auto G = [](cplx z) { return gamma_fn(z); };
    CHECK(inverse_at(G, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-6));

    // 1/z decays too slowly for a plain trapezoid
    auto R = [](cplx z) { return 1.0 / z; };
    CHECK(kind_of([&] { inverse_at(R, 0.5); }) == ErrorKind::TailTooFat);
    InverseOptions o;
    o.filter_order = 4;
    CHECK(std::abs(inverse_at(R, 0.5, o) - 1.0) < 1e-4);
    CHECK(std::abs(inverse_at(R, 2.0, o)) < 1e-4);

    // inverse of explicit samples, with the imaginary residue as a health check
    auto cs = sample_contour(G, 0.5, 60.0);
    double im = 1.0;
    double v = inverse(cs, 2.0, &im);
    CHECK(v == doctest::Approx(std::exp(-2.0)).epsilon(1e-6));
    CHECK(std::abs(im) < 1e-8);
}

TEST_CASE("round trip inverse(forward(f))") {
    auto f = sample([](double x) { return x * std::exp(-x); });
    InverseReport rep;
    auto back = inverse_on_grid([&](cplx z) { return forward(f, z); }, f, {}, &rep);
    CHECK(l2_distance(back, f) < 1e-6);
    CHECK(rep.max_imag_residue < 1e-8);
}

TEST_CASE("contour samples of real functions are conjugate symmetric") {
    auto f = sample([](double x) { return x * x * std::exp(-2.0 * x); });
    auto cs = forward_contour(f, 0.5, 20.0, 0.1);
    const std::size_t n = cs.lambdas.size();
    REQUIRE(n % 2 == 1);
    for (std::size_t i = 0; i < n; ++i) {
        CHECK(cs.lambdas[i] == doctest::Approx(-cs.lambdas[n - 1 - i]));
        CHECK(std::abs(cs.values[i] - std::conj(cs.values[n - 1 - i])) < 1e-12);
    }
}

TEST_CASE("plancherel examples") {
    auto e = sample([](double x) { return std::exp(-x); });
    auto pe = plancherel(e);
    CHECK(pe.direct_side * pe.direct_side == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(pe.mismatch < 1e-6);
    CHECK(plancherel_norm(e) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-6));

    auto z = grid().zeros_like();
    CHECK(plancherel_norm(z) == 0.0);

    auto xe = sample([](double x) { return x * std::exp(-x); });
    CHECK(plancherel_norm(xe) == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(plancherel(xe).mismatch < 1e-6);
}

TEST_CASE("moments and norms") {
    auto e = sample([](double x) { return std::exp(-x); });
    CHECK(first_moment(e, 1.0) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(first_moment(e, 2.0) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(first_moment(e, 0.5) == doctest::Approx(std::tgamma(4.0)).epsilon(1e-10));
    CHECK(l2_norm(e) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-8));
}

TEST_CASE("apply_multiplier identity and inverse pair") {
    auto f = sample([](double x) { return x * std::exp(-x); });
    auto id = apply_multiplier([](cplx) { return cplx(1.0); }, f, 0.5);
    CHECK(l2_distance(id, f) < 1e-8);

    // F and then 1/F; both decay on the line
    auto F = [](cplx z) { return std::exp(log_gamma(z + 1.0) - log_gamma(z + 1.5)); };
    auto Finv = [&](cplx z) { return 1.0 / F(z); };
    auto g = sample([](double x) { return x * x * std::exp(-x); });
    InverseOptions o;
    o.saddle = true;
    auto there = apply_multiplier(F, g, 0.5, o);
    auto back = apply_multiplier(Finv, there, 0.5, o);
    CHECK(l2_distance(back, g) < 1e-6 * l2_norm(g) + 1e-12);
}

TEST_CASE("multiplier Gamma(z)/Gamma(z+nu) is the Weyl integral") {
    // transform Γ(z)/Γ(z+ν) f~(z) belongs to x^ν U_ν[x^{-ν} f], U_ν the upper integral
    const double nu = 0.5;
    auto g = make_log_grid(1e-12, 1e2, 4096);
    auto f = sample_on(g, [](double x) { return std::exp(-x); });
    auto m = apply_multiplier([nu](cplx z) { return std::exp(log_gamma(z) - log_gamma(z + nu)); }, f, 0.5);
    auto w = sample_on(g, [nu](double x) { return std::pow(x, -nu) * std::exp(-x); });
    auto U = fractional_integral(nu, w, FracDirection::Upper);
    for (std::size_t i = 0; i < g.size(); ++i) U.values[i] *= std::pow(g.xs[i], nu);
    CHECK(l2_distance(m, U) < 1e-5);
}

TEST_CASE("multiplier giving the linear-kernel profile") {
    // Γ(z+1)/Γ(z+3/2) applied to e^{-x}
    auto g = make_log_grid(1e-12, 1e2, 4096);
    auto f = sample_on(g, [](double x) { return std::exp(-x); });
    InverseOptions o;
    o.saddle = true;
    auto m = apply_multiplier([](cplx z) { return std::exp(log_gamma(z + 1.0) - log_gamma(z + 1.5)); }, f,
                              0.5, o);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); i += 16) {
        double x = g.xs[i];
        if (x < 1e-8 || x > 40.0) continue;
        worst = std::max(worst, std::abs(m.values[i] - selfsimilar_linear_closed(3.0, 1.0, x)));
    }
    CHECK(worst < 1e-5);
}
