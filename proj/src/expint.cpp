#include "biostab/expint.hpp"

#include <cmath>
#include <string>

#include "biostab/errors.hpp"

namespace biostab {

namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

// Ascending series, x in (0, 1): E1(x) = -gamma - ln x + sum_{k>=1} (-1)^{k+1} x^k / (k k!).
double e1_series(double x) {
    double sum = 0.0;
    double term = 1.0;  // (-x)^k / k!
    for (int k = 1; k <= 64; ++k) {
        term *= -x / k;
        const double add = -term / k;
        sum += add;
        if (std::fabs(add) < 1e-18 * std::fabs(sum)) break;
    }
    return sum - kEulerGamma - std::log(x);
}

// Continued fraction (modified Lentz), x >= 1:
// E_n(x) = e^{-x} [ 1/(x+n -) 1*n/(x+n+2 -) 2*(n+1)/(x+n+4 -) ... ].
double en_continued_fraction(int n, double x) {
    const double tiny = 1e-300;
    double b = x + n;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 400; ++i) {
        const double a = -static_cast<double>(i) * (n - 1 + i);
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        const double del = c * d;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x);
}

void check_range(double tau, double tau_h, const char* op) {
    if (!(tau_h >= 0.0))
        throw DomainError(std::string(op) + ": tau_h must be non-negative");
    if (!(tau >= 0.0 && tau <= tau_h))
        throw DomainError(std::string(op) + ": tau outside [0, tau_h]");
}

}  // namespace

double expint(int n, double x) {
    if (n < 1) throw DomainError("expint: order n must be >= 1");
    if (!(x >= 0.0)) throw DomainError("expint: x must be non-negative");
    if (x == 0.0) {
        if (n == 1) throw DomainError("expint: E_1 diverges at x = 0");
        return 1.0 / (n - 1);
    }
    if (x > 700.0) return 0.0;  // e^{-x} underflows; E_n(x) < e^{-x}/x
    if (x < 1.0) {
        double e = e1_series(x);
        const double ex = std::exp(-x);
        for (int m = 1; m < n; ++m) e = (ex - x * e) / m;
        return e;
    }
    return en_continued_fraction(n, x);
}

double kernel_primitive_E1(double tau, double tau_h) {
    check_range(tau, tau_h, "kernel_primitive_E1");
    if (tau_h == 0.0) return 0.0;
    const double e2_left = (tau == 0.0) ? 1.0 : expint(2, tau);
    const double e2_right = (tau == tau_h) ? 1.0 : expint(2, tau_h - tau);
    return 2.0 - e2_left - e2_right;
}

double kernel_primitive_E2_signed(double tau, double tau_h) {
    check_range(tau, tau_h, "kernel_primitive_E2_signed");
    if (tau_h == 0.0) return 0.0;
    return expint(3, tau_h - tau) - expint(3, tau);
}

double kernel_primitive_E3(double tau, double tau_h) {
    check_range(tau, tau_h, "kernel_primitive_E3");
    if (tau_h == 0.0) return 0.0;
    return 2.0 / 3.0 - expint(4, tau) - expint(4, tau_h - tau);
}

}  // namespace biostab
