#pragma once

#include <functional>
#include <vector>

#include "biostab/params.hpp"

namespace oracles {

/// Adaptive Simpson quadrature, independent of any production code path.
double adaptive_quad(const std::function<double(double)>& f, double a, double b,
                     double tol = 1e-12);

/// E_n(x) via the substitution E_n(x) = integral_0^1 u^{n-2} e^{-x/u} du.
double expint_quad(int n, double x);

/// Independent dense Nystrom solve of the steady radiative system on its own
/// uniform grid (odd node count), using its own kernel assembly and LAPACK.
struct DenseFieldOracle {
    std::vector<double> tau, g, q;
};
DenseFieldOracle dense_nystrom_field(const biostab::ProblemParams& p, int n_nodes);

/// Central difference with Richardson refinement.
double central_diff(const std::function<double(double)>& f, double x, double h);

}  // namespace oracles
