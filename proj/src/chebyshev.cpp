#include "biostab/chebyshev.hpp"

#include <cmath>

#include "biostab/errors.hpp"

namespace biostab {

ChebyshevGrid make_chebyshev_grid(int degree) {
    if (degree < 2) throw ValidationError("make_chebyshev_grid: degree must be >= 2");
    const int n = degree;
    ChebyshevGrid grid;
    grid.degree = n;
    grid.z.resize(n + 1);

    // Standard Gauss-Lobatto differentiation matrix on x_j = cos(pi j / N),
    // then mapped to z = (1 - x)/2 so that d/dz = -2 d/dx.
    std::vector<double> x(n + 1), c(n + 1);
    for (int j = 0; j <= n; ++j) {
        x[j] = std::cos(M_PI * j / n);
        grid.z[j] = 0.5 * (1.0 - x[j]);
        c[j] = (j == 0 || j == n) ? 2.0 : 1.0;
        if (j % 2 == 1) c[j] = -c[j];
    }
    Eigen::MatrixXd dx(n + 1, n + 1);
    for (int i = 0; i <= n; ++i) {
        double row_sum = 0.0;
        for (int j = 0; j <= n; ++j) {
            if (i == j) continue;
            dx(i, j) = (c[i] / c[j]) / (x[i] - x[j]);
            row_sum += dx(i, j);
        }
        dx(i, i) = -row_sum;
    }
    grid.d1 = -2.0 * dx;
    grid.d2 = grid.d1 * grid.d1;
    return grid;
}

std::vector<double> clenshaw_curtis_weights(int degree) {
    const int n = degree;
    if (n < 2) throw ValidationError("clenshaw_curtis_weights: degree must be >= 2");
    std::vector<double> w(n + 1, 0.0);
    std::vector<double> v(n - 1, 1.0);
    const auto theta = [&](int j) { return M_PI * j / n; };
    if (n % 2 == 0) {
        w[0] = w[n] = 1.0 / (n * n - 1.0);
        for (int k = 1; k <= n / 2 - 1; ++k)
            for (int j = 1; j < n; ++j)
                v[j - 1] -= 2.0 * std::cos(2.0 * k * theta(j)) / (4.0 * k * k - 1.0);
        for (int j = 1; j < n; ++j) v[j - 1] -= std::cos(n * theta(j)) / (n * n - 1.0);
    } else {
        w[0] = w[n] = 1.0 / (n * n);
        for (int k = 1; k <= (n - 1) / 2; ++k)
            for (int j = 1; j < n; ++j)
                v[j - 1] -= 2.0 * std::cos(2.0 * k * theta(j)) / (4.0 * k * k - 1.0);
    }
    for (int j = 1; j < n; ++j) w[j] = 2.0 * v[j - 1] / n;
    // Weights above integrate over x in [-1, 1]; halve for z in [0, 1].
    for (auto& wi : w) wi *= 0.5;
    return w;
}

}  // namespace biostab
