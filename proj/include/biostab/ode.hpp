#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "biostab/errors.hpp"

namespace biostab {

/// Adaptive Dormand-Prince RK5(4) integration of y' = f(z, y) from nodes[0]
/// to nodes.back(), landing exactly on every node (the nodes must be strictly
/// monotone; integration direction follows them). Returns the state at each
/// node. f has signature void(double z, const std::array<double,N>&,
/// std::array<double,N>&) and may throw to abort.
template <std::size_t N, class F>
std::vector<std::array<double, N>> integrate_rk45(F&& f, std::array<double, N> y0,
                                                  std::span<const double> nodes,
                                                  double rtol = 1e-10, double atol = 1e-12) {
    using State = std::array<double, N>;
    if (nodes.size() < 2) throw ValidationError("integrate_rk45: need at least two nodes");
    const double dir = nodes[1] > nodes[0] ? 1.0 : -1.0;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
        if (!((nodes[i + 1] - nodes[i]) * dir > 0.0))
            throw ValidationError("integrate_rk45: nodes must be strictly monotone");

    // Dormand-Prince coefficients.
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    std::vector<State> out;
    out.reserve(nodes.size());
    out.push_back(y0);

    State y = y0, k1, k2, k3, k4, k5, k6, k7, ytmp, ynew;
    double z = nodes[0];
    f(z, y, k1);
    double h = (nodes.back() - nodes.front()) / 100.0;

    const std::size_t max_steps = 2000000;
    std::size_t steps = 0;

    for (std::size_t target = 1; target < nodes.size(); ++target) {
        const double z_end = nodes[target];
        while (dir * (z_end - z) > 0.0) {
            if (++steps > max_steps)
                throw IterationError("integrate_rk45: step budget exhausted", {});
            if (dir * h <= 0.0) h = dir * 1e-14 * std::max(1.0, std::fabs(z));
            if (dir * (z + h - z_end) > 0.0) h = z_end - z;

            auto stage = [&](double frac, const State& yy, State& kk) { f(z + frac * h, yy, kk); };
            for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
            stage(c2, ytmp, k2);
            for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
            stage(c3, ytmp, k3);
            for (std::size_t i = 0; i < N; ++i)
                ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
            stage(c4, ytmp, k4);
            for (std::size_t i = 0; i < N; ++i)
                ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
            stage(c5, ytmp, k5);
            for (std::size_t i = 0; i < N; ++i)
                ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                                      a65 * k5[i]);
            stage(1.0, ytmp, k6);
            for (std::size_t i = 0; i < N; ++i)
                ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
            f(z + h, ynew, k7);

            double err = 0.0;
            for (std::size_t i = 0; i < N; ++i) {
                const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                       e6 * k6[i] + e7 * k7[i]);
                const double sc = atol + rtol * std::max(std::fabs(y[i]), std::fabs(ynew[i]));
                err = std::max(err, std::fabs(ei) / sc);
            }

            if (err <= 1.0) {
                z += h;
                y = ynew;
                k1 = k7;  // FSAL
            }
            const double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
            h *= std::clamp(fac, 0.2, 5.0);
        }
        z = z_end;
        out.push_back(y);
    }
    return out;
}

}  // namespace biostab
