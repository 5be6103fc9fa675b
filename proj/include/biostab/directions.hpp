#pragma once

#include <vector>

namespace biostab {

/// Product angular quadrature: Gauss-Legendre in the vertical cosine per
/// hemisphere (so no node sits on the horizontal plane) and uniform azimuth.
/// Sum of all product weights is 4 pi.
struct DirectionSet {
    std::vector<double> mu;     // vertical cosines, both hemispheres
    std::vector<double> w_mu;   // weights, sum = 2
    std::vector<double> phi;    // azimuth nodes on [0, 2 pi)
    std::vector<double> w_phi;  // weights, sum = 2 pi

    int n_mu() const { return static_cast<int>(mu.size()); }
    int n_phi() const { return static_cast<int>(phi.size()); }
    double total_weight() const;
};

/// n_mu even >= 4 (n_mu/2 Gauss nodes per hemisphere), n_phi >= 4.
DirectionSet make_direction_set(int n_mu, int n_phi);

/// Gauss-Legendre nodes/weights on (-1, 1).
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace biostab
