#include "biostab/directions.hpp"

#include <cmath>

#include "biostab/errors.hpp"

namespace biostab {

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Chebyshev estimate, then Newton on P_n.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
}

DirectionSet make_direction_set(int n_mu, int n_phi) {
    if (n_mu < 4 || n_mu % 2 != 0)
        throw ValidationError("make_direction_set: n_mu must be even and >= 4");
    if (n_phi < 4) throw ValidationError("make_direction_set: n_phi must be >= 4");

    std::vector<double> x, w;
    gauss_legendre(n_mu / 2, x, w);

    DirectionSet d;
    d.mu.reserve(n_mu);
    d.w_mu.reserve(n_mu);
    // Map (-1,1) -> (0,1) per hemisphere; weights halve with the interval.
    for (int i = 0; i < n_mu / 2; ++i) {
        const double m = 0.5 * (x[i] + 1.0);
        const double wm = 0.5 * w[i];
        d.mu.push_back(-m);
        d.w_mu.push_back(wm);
    }
    for (int i = 0; i < n_mu / 2; ++i) {
        const double m = 0.5 * (x[i] + 1.0);
        const double wm = 0.5 * w[i];
        d.mu.push_back(m);
        d.w_mu.push_back(wm);
    }
    d.phi.resize(n_phi);
    d.w_phi.assign(n_phi, 2.0 * M_PI / n_phi);
    for (int j = 0; j < n_phi; ++j) d.phi[j] = 2.0 * M_PI * j / n_phi;
    return d;
}

double DirectionSet::total_weight() const {
    double sm = 0.0, sp = 0.0;
    for (double w : w_mu) sm += w;
    for (double w : w_phi) sp += w;
    return sm * sp;
}

}  // namespace biostab
