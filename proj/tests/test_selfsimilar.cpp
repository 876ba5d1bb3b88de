#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "frag/error.hpp"
#include "frag/kernel.hpp"
#include "frag/oracle.hpp"
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

KernelFactorization fact(std::vector<double> k, double g) { return factor_kernel(validate_daughter(k), g); }

const GridFunction& grid() {
    static GridFunction g = make_log_grid(1e-12, 1e2, 8192);
    return g;
}

}  // namespace

TEST_CASE("transform examples") {
    auto f2 = fact({2.0}, 1.0);
    CHECK(std::abs(selfsimilar_mellin_raw(f2, 3.0) - cplx(2.0)) < 1e-13);
    auto f2g = fact({2.0}, 2.0);
    CHECK(std::abs(selfsimilar_mellin_raw(f2g, 3.0) - cplx(2.0)) < 1e-13);
    CHECK(std::abs(selfsimilar_mellin(f2g, 1.0) - cplx(1.0)) < 1e-13);

    auto lin = fact({3.0, -1.5}, 1.0);
    for (cplx z : {cplx(0.5, 0.0), cplx(1.2, 3.0), cplx(4.0, -7.5)}) {
        cplx ref = gamma_fn(z) * gamma_fn(z + 1.0) / gamma_fn(z + 1.5);
        CHECK(std::abs(selfsimilar_mellin_raw(lin, z) - ref) < 1e-12 * std::abs(ref));
    }
    CHECK(std::abs(selfsimilar_mellin(lin, 2.0) - cplx(1.0)) < 1e-13);
}

TEST_CASE("conjugate symmetry") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> re(0.1, 5.0), im(-20.0, 20.0);
    auto f = fact({1.0, 1.0, 1.0, -5.0 / 12.0}, 1.0);
    for (int i = 0; i < 20; ++i) {
        cplx z(re(rng), im(rng));
        cplx a = selfsimilar_mellin(f, std::conj(z)), b = std::conj(selfsimilar_mellin(f, z));
        CHECK(std::abs(a - b) <= 1e-12 * std::abs(b));
    }
}

TEST_CASE("functional equation on a contour") {
    for (auto k : std::vector<std::vector<double>>{{2.0}, {3.0, -1.5}, {1.0, 1.5}, {4.0, -6.0, 4.0}}) {
        for (double g : {1.0, 2.0}) {
            auto f = fact(k, g);
            auto p = validate_daughter(k);
            for (int i = 0; i < 50; ++i) {
                cplx z(0.5, -25.0 + i);
                cplx u = selfsimilar_mellin(f, z), u1 = selfsimilar_mellin(f, z + 1.0);
                cplx r = -g * z * u + 2.0 * u - multiplier_K(z, p, g) * u1;
                double scale = std::abs(g * z * u) + std::abs(2.0 * u) + std::abs(multiplier_K(z, p, g) * u1);
                CHECK(std::abs(r) <= 1e-9 * scale);
            }
        }
    }
}

TEST_CASE("contour decay faster than 1/sqrt(cosh)") {
    for (auto k : std::vector<std::vector<double>>{{2.0}, {3.0, -1.5}, {1.0, 1.5}}) {
        auto f = fact(k, 1.0);
        const double p1 = validate_daughter(k).at_one();
        auto scaled = [&](double l) {
            double lu = std::log(std::abs(selfsimilar_mellin(f, cplx(0.5, l))));
            double lc = l + std::log1p(std::exp(-2.0 * l)) - std::log(2.0);
            return std::exp(lu - 0.5 * (p1 - 2.0) * std::log1p(l * l) + 0.5 * lc);
        };
        double c0 = std::max(scaled(1.0), scaled(2.0));
        for (double l = 1.0; l <= 100.0; l += 0.5) CHECK(scaled(l) <= 1.01 * c0);
    }
}

TEST_CASE("constant kernel profile is e^{-x}") {
    auto pr = selfsimilar_profile(fact({2.0}, 1.0), grid());
    double worst = 0.0;
    for (std::size_t i = 0; i < grid().size(); ++i) {
        double x = grid().xs[i];
        if (x >= 0.01 && x <= 20.0) worst = std::max(worst, std::abs(pr.profile.values[i] - std::exp(-x)));
    }
    CHECK(worst < 1e-7);
    CHECK(pr.tail_fitted);
    CHECK(std::abs(pr.tail_exponent_fit) < 0.02);
}

TEST_CASE("profile invariants") {
    for (auto k : std::vector<std::vector<double>>{{2.0}, {3.0, -1.5}, {1.0, 1.5}, {0.0, 3.0}}) {
        for (double g : {1.0, 2.0}) {
            auto pr = selfsimilar_profile(fact(k, g), grid());
            double mx = *std::max_element(pr.profile.values.begin(), pr.profile.values.end());
            double mn = *std::min_element(pr.profile.values.begin(), pr.profile.values.end());
            CHECK(mn >= -1e-8 * mx);
            CHECK(first_moment(pr.profile, g) == doctest::Approx(1.0).epsilon(1e-6));
            CHECK(pr.profile.tag == VariableTag::Transformed);
        }
    }
}

TEST_CASE("linear kernel: inversion against the closed form") {
    auto f = fact({3.0, -1.5}, 1.0);
    auto pr = selfsimilar_profile(f, grid());
    GridFunction closed = grid().zeros_like();
    for (std::size_t i = 0; i < grid().size(); ++i)
        closed.values[i] = selfsimilar_linear_closed(3.0, 1.0, grid().xs[i]) / pr.normalization;
    CHECK(l2_distance(pr.profile, closed) < 1e-6 * l2_norm(closed));
}

TEST_CASE("closed form examples") {
    CHECK(selfsimilar_linear_closed(2.0, 1.0, 1.0) == doctest::Approx(0.367879).epsilon(1e-6));
    CHECK(selfsimilar_linear_closed(3.0, 1.0, 0.0) == doctest::Approx(1.128379).epsilon(1e-6));
    // u e^x x^{(a0-2)/(2γ)} -> 1
    for (double x : {30.0, 50.0, 80.0}) {
        double r = selfsimilar_linear_closed(3.0, 1.0, x) * std::exp(x) * std::pow(x, 0.5);
        CHECK(std::abs(r - 1.0) < 0.05);
    }
    // a0 < 2 branch against its own transform: ∫ x^{z-1} u = Γ(z)Γ(z+1/γ)/Γ(z+a0/(2γ))
    auto g = grid();
    auto u = sample_on(g, [](double x) { return selfsimilar_linear_closed(1.0, 1.0, x); });
    cplx ref = gamma_fn(2.0) * gamma_fn(3.0) / gamma_fn(2.5);
    CHECK(std::abs(forward(u, 2.0) - ref) < 1e-7 * std::abs(ref));
    CHECK(kind_of([] { selfsimilar_linear_closed(3.0, 1.0, -1.0); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("tail exponents") {
    CHECK(std::abs(tail_exponent(selfsimilar_profile(fact({2.0}, 1.0), grid()))) < 0.02);
    CHECK(tail_exponent(selfsimilar_profile(fact({3.0, -1.5}, 1.0), grid())) ==
          doctest::Approx(-0.5).epsilon(0.1));
    CHECK(tail_exponent(selfsimilar_profile(fact({1.0, 1.5}, 1.0), grid())) == doctest::Approx(0.5).epsilon(0.1));

    auto shortg = make_log_grid(1e-12, 10.0, 2048);
    auto e = sample_on(shortg, [](double x) { return std::exp(-x); });
    CHECK(kind_of([&] { tail_exponent(e); }) == ErrorKind::InsufficientTail);
}

TEST_CASE("value at the origin") {
    CHECK(value_at_zero(fact({2.0}, 1.0)) == doctest::Approx(1.0));
    CHECK(value_at_zero(fact({2.0}, 1.0), true) == doctest::Approx(1.0));
    auto lin = fact({3.0, -1.5}, 1.0);
    CHECK(value_at_zero(lin) == doctest::Approx(1.0 / std::tgamma(1.5)).epsilon(1e-12));
    auto pr = selfsimilar_profile(lin, grid());
    CHECK(pr.profile.values.front() == doctest::Approx(value_at_zero(lin, true)).epsilon(1e-3));
    CHECK(value_at_zero(lin, true) == doctest::Approx(value_at_zero(lin) / pr.normalization));
}

TEST_CASE("stationarity under the direct operator") {
    auto p = validate_daughter({2.0});
    auto pr = selfsimilar_profile(factor_kernel(p, 1.0), grid());
    auto Lu = apply_operator(pr.profile, p, 1.0);
    CHECK(l2_norm(Lu) < 1e-4 * l2_norm(pr.profile));
}
