#include <cmath>

#include <doctest.h>

#include "biostab/errors.hpp"
#include "biostab/expint.hpp"
#include "oracles.hpp"

using biostab::expint;
using biostab::kernel_primitive_E1;
using biostab::kernel_primitive_E2_signed;
using biostab::kernel_primitive_E3;

TEST_CASE("exponential integral: values at zero and domain errors") {
    CHECK(expint(2, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(expint(3, 0.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(expint(4, 0.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK_THROWS_AS(expint(1, 0.0), biostab::DomainError);
    CHECK_THROWS_AS(expint(0, 1.0), biostab::DomainError);
    CHECK_THROWS_AS(expint(1, -0.5), biostab::DomainError);
    CHECK(expint(1, 1000.0) == 0.0);  // underflow-safe
}

TEST_CASE("exponential integral: E1(1) against the quadrature oracle") {
    // Frozen from the adaptive-quadrature oracle of integral_1^inf e^{-t}/t dt.
    const double frozen = 0.21938393439552028;
    CHECK(oracles::expint_quad(1, 1.0) == doctest::Approx(frozen).epsilon(1e-12));
    CHECK(expint(1, 1.0) == doctest::Approx(frozen).epsilon(1e-13));
}

TEST_CASE("exponential integral: relative error <= 1e-12 across the working range") {
    for (const int n : {1, 2, 3, 4}) {
        for (const double x : {1e-12, 1e-6, 0.01, 0.1, 0.5, 0.9, 1.0, 1.5, 3.0, 10.0, 50.0}) {
            const double ref = oracles::expint_quad(n, x);
            const double got = expint(n, x);
            CHECK_MESSAGE(std::fabs(got - ref) <= 1.2e-12 * std::max(ref, 1e-300),
                          "n=", n, " x=", x, " got=", got, " ref=", ref);
        }
    }
}

TEST_CASE("exponential integral: recurrence n E_{n+1} = e^{-x} - x E_n") {
    for (const int n : {1, 2, 3}) {
        for (const double x : {0.01, 0.1, 1.0, 5.0}) {
            const double lhs = n * expint(n + 1, x);
            const double rhs = std::exp(-x) - x * expint(n, x);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-11));
        }
    }
}

TEST_CASE("exponential integral: monotone decrease on a log-spaced scan") {
    for (const int n : {1, 2, 3, 4}) {
        double prev = expint(n, 1e-10);
        for (double x = 1e-9; x <= 60.0; x *= 1.8) {
            const double cur = expint(n, x);
            CHECK(cur < prev);
            CHECK(cur > 0.0);
            prev = cur;
        }
    }
}

TEST_CASE("kernel primitive for the singular kernel") {
    CHECK(kernel_primitive_E1(0.0, 0.0) == 0.0);
    // Symmetric midpoint: 2 - 2 E2(tau_h / 2).
    const double tau_h = 0.8;
    CHECK(kernel_primitive_E1(0.4, tau_h) ==
          doctest::Approx(2.0 - 2.0 * expint(2, 0.4)).epsilon(1e-14));
    // Arbitrary point against adaptive quadrature of the integral itself.
    for (const auto& [tau, th] : {std::pair{0.13, 0.5}, std::pair{0.77, 1.0}, std::pair{0.02, 1.0}}) {
        const double ref = oracles::adaptive_quad(
            [tau = tau](double t) { return expint(1, std::max(std::fabs(tau - t), 1e-300)); }, 0.0,
            th, 1e-12);
        CHECK(kernel_primitive_E1(tau, th) == doctest::Approx(ref).epsilon(1e-10));
    }
    CHECK_THROWS_AS(kernel_primitive_E1(1.2, 1.0), biostab::DomainError);
}

TEST_CASE("kernel primitive for the signed kernel") {
    const double tau_h = 0.9;
    CHECK(kernel_primitive_E2_signed(0.45, tau_h) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(kernel_primitive_E2_signed(0.0, tau_h) ==
          doctest::Approx(expint(3, tau_h) - 0.5).epsilon(1e-14));
    for (const auto& [tau, th] : {std::pair{0.2, 0.5}, std::pair{0.61, 1.0}}) {
        const double ref = oracles::adaptive_quad(
            [tau = tau](double t) {
                const double d = tau - t;
                if (d == 0.0) return 0.0;
                return expint(2, std::fabs(d)) * (d > 0.0 ? 1.0 : -1.0);
            },
            0.0, th, 1e-12);
        CHECK(kernel_primitive_E2_signed(tau, th) == doctest::Approx(ref).epsilon(1e-10));
    }
    CHECK_THROWS_AS(kernel_primitive_E2_signed(-0.1, 1.0), biostab::DomainError);
}

TEST_CASE("kernel primitive for the smooth kernel") {
    for (const auto& [tau, th] : {std::pair{0.2, 0.5}, std::pair{0.9, 1.0}}) {
        const double ref = oracles::adaptive_quad(
            [tau = tau](double t) { return expint(3, std::fabs(tau - t)); }, 0.0, th, 1e-12);
        CHECK(kernel_primitive_E3(tau, th) == doctest::Approx(ref).epsilon(1e-10));
    }
}
