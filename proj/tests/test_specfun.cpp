#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "vanetcorr/errors.hpp"
#include "vanetcorr/quadrature.hpp"
#include "vanetcorr/specfun.hpp"

using namespace vanetcorr;

namespace {

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

struct Params {
    double a, b, c;
};

// The four hypergeometric parameter shapes that appear in the closed forms.
Params family(int which, double eta) {
    switch (which) {
        case 0: return {2 * eta - 1, eta, 2 * eta};
        case 1: return {2 * eta - 2, eta, 2 * eta - 1};
        case 2: return {2 * eta, eta + 1, 2 * eta + 1};
        default: return {eta, 2 * eta - 1, 2 * eta};
    }
}

}  // namespace

TEST_CASE("hyp2f1 equals one at z = 0") {
    for (int which = 0; which < 4; ++which) {
        const auto p = family(which, 3.0);
        CHECK(hyp2f1(p.a, p.b, p.c, 0.0) == 1.0);
    }
    CHECK(hyp2f1(0.3, 1.7, 4.1, 0.0) == 1.0);
}

TEST_CASE("hyp2f1(1,1;2;z) is -log(1-z)/z") {
    CHECK(hyp2f1(1, 1, 2, 0.5) == doctest::Approx(1.3862944).epsilon(1e-7));
    for (double z : {0.9, 0.5, 0.1, -0.3, -1.0, -2.06}) {
        const double expected = -std::log1p(-z) / z;
        CHECK(rel_diff(hyp2f1(1, 1, 2, z), expected) < 1e-12);
    }
}

TEST_CASE("hyp2f1 at (5,3;6;-1) matches the Euler integral") {
    const double oracle = oracle::hyp2f1_euler(5, 3, 6, -1.0);
    CHECK(rel_diff(hyp2f1(5, 3, 6, -1.0), oracle) < 1e-10);
}

TEST_CASE("hyp2f1 agrees with the Euler integral across the parameter family") {
    std::mt19937_64 gen(4242);
    std::uniform_real_distribution<double> eta_dist(2.05, 6.0);
    std::uniform_real_distribution<double> z_dist(-2.1, 0.0);
    std::uniform_int_distribution<int> shape(0, 3);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        const auto p = family(shape(gen), eta_dist(gen));
        const double z = z_dist(gen);
        worst = std::max(worst, rel_diff(hyp2f1(p.a, p.b, p.c, z), oracle::hyp2f1_euler(p.a, p.b, p.c, z)));
    }
    MESSAGE("worst relative deviation " << worst);
    CHECK(worst < 1e-8);
}

TEST_CASE("hyp2f1 derivative follows the contiguity relation") {
    const double h = 1e-6;
    for (int which = 0; which < 4; ++which) {
        const auto p = family(which, 3.0);
        for (double z : {-2.0, -1.0, -0.4, 0.3}) {
            const double fd = (hyp2f1(p.a, p.b, p.c, z + h) - hyp2f1(p.a, p.b, p.c, z - h)) / (2 * h);
            const double exact = p.a * p.b / p.c * hyp2f1(p.a + 1, p.b + 1, p.c + 1, z);
            CHECK(rel_diff(fd, exact) < 1e-5);
        }
    }
}

TEST_CASE("hyp2f1 rejects arguments outside its family") {
    CHECK_THROWS_AS(hyp2f1(1, 2, 2, 0.1), DomainError);
    CHECK_THROWS_AS(hyp2f1(1, 0, 2, 0.1), DomainError);
    CHECK_THROWS_AS(hyp2f1(1, 1, 2, 1.0), DomainError);
    CHECK_THROWS_AS(hyp2f1(1, 1, 2, 1.5), DomainError);
    CHECK_THROWS_AS(hyp2f1(1, 1, 2, std::nan("")), DomainError);
}

TEST_CASE("upper_gamma closed-form values") {
    CHECK(rel_diff(upper_gamma(1.0, 2.0), std::exp(-2.0)) < 1e-13);
    CHECK(upper_gamma(0.5, 1e-14) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-6));
    CHECK(rel_diff(upper_gamma(0.5, 0.0), std::sqrt(std::numbers::pi)) < 1e-14);
    // Gamma(0.5, x) = sqrt(pi) erfc(sqrt(x)).
    for (double x : {0.01, 0.7, 3.0, 20.0})
        CHECK(rel_diff(upper_gamma(0.5, x), std::sqrt(std::numbers::pi) * std::erfc(std::sqrt(x))) < 1e-12);
}

TEST_CASE("upper_gamma(-2, 1) matches quadrature") {
    // int_1^inf t^-3 e^-t dt, mapped to s = 1/t.
    const double oracle = oracle::tanh_sinh([](double s) { return s * std::exp(-1.0 / std::max(s, 1e-300)); }, 0.0, 1.0);
    CHECK(rel_diff(upper_gamma(-2.0, 1.0), oracle) < 1e-10);
}

TEST_CASE("upper_gamma agrees with direct integration for real orders") {
    double worst = 0.0;
    for (double a : {-4.7, -3.5, -2.0, -1.3, -0.5, 0.0, 0.25, 1.5, 3.3, 4.9}) {
        for (double x : {0.1, 0.5, 1.0, 2.5, 7.0, 15.0, 40.0}) {
            worst = std::max(worst, rel_diff(upper_gamma(a, x), oracle::upper_gamma_integral(a, x)));
        }
    }
    MESSAGE("worst relative deviation " << worst);
    CHECK(worst < 1e-10);
}

TEST_CASE("upper_gamma is smooth across integer orders") {
    for (double a : {std::nextafter(-3.0, 0.0), -3.0 + 1e-9, 1e-12, std::nextafter(0.0, -1.0), -1.0 - 1e-10}) {
        for (double x : {0.2, 1.0, 1.4}) {
            CHECK(rel_diff(upper_gamma(a, x), oracle::upper_gamma_integral(a, x)) < 1e-10);
        }
    }
}

TEST_CASE("upper_gamma recurrence closes") {
    double worst = 0.0;
    for (double a = -4.85; a < 5.0; a += 0.37) {
        for (double x : {0.1, 0.3, 1.0, 1.7, 4.0, 9.0, 20.0, 50.0}) {
            const double lhs = a * upper_gamma(a, x) + std::pow(x, a) * std::exp(-x);
            worst = std::max(worst, rel_diff(lhs, upper_gamma(a + 1.0, x)));
        }
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("upper_gamma_scaled stays finite where the plain value underflows") {
    const double x = 800.0;
    CHECK(upper_gamma(-2.0, x) == 0.0);
    // e^x Gamma(a, x) ~ x^(a-1) (1 + (a-1)/x + ...).
    const double scaled = upper_gamma_scaled(-2.0, x);
    CHECK(rel_diff(scaled, std::pow(x, -3.0) * (1.0 - 3.0 / x + 12.0 / (x * x))) < 1e-6);
    CHECK(rel_diff(upper_gamma_scaled(1.3, 2.0), std::exp(2.0) * upper_gamma(1.3, 2.0)) < 1e-13);
}

TEST_CASE("upper_gamma domain") {
    CHECK_THROWS_AS(upper_gamma(-1.5, 0.0), DomainError);
    CHECK_THROWS_AS(upper_gamma(1.5, -1.0), DomainError);
}

TEST_CASE("integrate_finite basics") {
    CHECK(integrate_finite([](double) { return 1.0; }, 0.0, 3.0).value == doctest::Approx(3.0).epsilon(1e-14));
    const double cube = integrate_finite([](double x) { return std::pow(x, -3.0); }, 150.0, 300.0).value;
    CHECK(rel_diff(cube, (std::pow(150.0, -2) - std::pow(300.0, -2)) / 2) < 1e-12);
    CHECK(cube == doctest::Approx(1.6667e-5).epsilon(1e-4));
    CHECK(integrate_finite([](double x) { return x; }, 2.0, 2.0).value == 0.0);
}

TEST_CASE("integrate_finite is deterministic and honours kinks") {
    auto kinked = [](double x) { return std::abs(x - 0.3) + (x > 0.7 ? 1.0 : 0.0); };
    const double a = integrate_finite(kinked, 0.0, 1.0).value;
    const double b = integrate_finite(kinked, 0.0, 1.0).value;
    CHECK(a == b);
    const double exact = (0.3 * 0.3 + 0.7 * 0.7) / 2 + 0.3;
    CHECK(rel_diff(a, exact) < 1e-9);
    const std::vector<double> points{0.0, 0.3, 0.7, 1.0};
    CHECK(rel_diff(integrate_pieces(kinked, points).value, exact) < 1e-14);
}

TEST_CASE("integrate_finite reports non-convergence with its best estimate") {
    QuadratureSpec spec;
    spec.max_depth = 10;
    spec.rel_tol = 1e-15;
    spec.abs_tol = 1e-300;
    try {
        integrate_finite([](double x) { return std::sin(1.0 / x); }, 1e-9, 1.0, spec);
        FAIL("expected a convergence error");
    } catch (const ConvergenceError& e) {
        CHECK(std::isfinite(e.best_estimate()));
        CHECK(e.error_bound() > 0.0);
    }
    CHECK_THROWS_AS(integrate_finite([](double) { return 1.0; }, 1.0, 0.0), DomainError);
    QuadratureSpec bad;
    bad.rel_tol = 0.0;
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad = {};
    bad.max_depth = 5;
    CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("integrate_semi_infinite power tails") {
    const auto cubic = integrate_semi_infinite([](double x) { return std::pow(x, -3.0); }, 150.0, PowerTail{1.0, 3.0, 150.0});
    CHECK(rel_diff(cubic.value, std::pow(150.0, -2) / 2) < 1e-11);
    CHECK(cubic.tail_bound <= 1e-12 * cubic.value);

    const auto sixth = integrate_semi_infinite([](double x) { return std::pow(x, -6.0); }, 150.0, PowerTail{1.0, 6.0, 150.0});
    CHECK(rel_diff(sixth.value, std::pow(150.0, -5) / 5) < 1e-11);
    CHECK(sixth.value == doctest::Approx(2.6337e-12).epsilon(1e-4));

    const auto zero = integrate_semi_infinite([](double) { return 0.0; }, 1.0, PowerTail{0.0, 2.0, 1.0});
    CHECK(zero.value == 0.0);
}
