#pragma once

#include <vector>

#include <Eigen/Dense>

namespace biostab {

/// Chebyshev-Gauss-Lobatto collocation grid on [0, 1] with spectral
/// differentiation matrices. Nodes ascend: z_j = (1 - cos(pi j / N)) / 2.
struct ChebyshevGrid {
    int degree = 0;              // N; the grid has N + 1 nodes
    std::vector<double> z;
    Eigen::MatrixXd d1, d2;      // d/dz and d^2/dz^2 on the nodes
};

ChebyshevGrid make_chebyshev_grid(int degree);

/// Clenshaw-Curtis quadrature weights on the same nodes (integral over [0,1]).
std::vector<double> clenshaw_curtis_weights(int degree);

}  // namespace biostab
