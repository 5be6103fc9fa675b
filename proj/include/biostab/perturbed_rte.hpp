#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "biostab/basic_state.hpp"
#include "biostab/directions.hpp"

namespace biostab {

/// Angular moments of the perturbed intensity for one amplitude profile:
/// g1 = scalar moment, (p, q, s) = first moments against the horizontal and
/// vertical direction cosines, all on the state's collocation grid.
struct PerturbedMoments {
    std::vector<std::complex<double>> g1, p, q, s;
    bool converged = false;
    int iterations = 0;
};

/// Dense complex maps from a nodal Theta profile to the nodal moments.
struct MomentOperator {
    Eigen::MatrixXcd g_of_theta;  // Theta -> scalar moment
    Eigen::MatrixXcd p_of_theta;  // Theta -> x first moment
    Eigen::MatrixXcd q_of_theta;  // Theta -> y first moment
    Eigen::MatrixXcd s_of_theta;  // Theta -> z first moment
    double m1 = 0.0, m2 = 0.0;
    std::uint64_t state_hash = 0;
};

/// Source iteration for the perturbed directional intensity: starting from
/// zero moments, each sweep integrates one linear ODE per direction (zero
/// incoming intensity at both walls) and recomputes the moments by angular
/// quadrature, until successive scalar/vertical moments change by less than
/// tol in the max norm (relative to the moment scale). Throws IterationError
/// with the residual history after max_iter sweeps.
PerturbedMoments solve_perturbed_intensity(std::span<const std::complex<double>> theta,
                                           const BasicState& state, double m1, double m2,
                                           const DirectionSet& dirs, double tol = 1e-9,
                                           int max_iter = 200);

/// Assembles the exact fixed point of the same discretization as dense linear
/// maps: the directional propagation operators are accumulated per direction
/// and the scalar/vertical moment feedback is eliminated with one LU solve.
MomentOperator moment_operator(const BasicState& state, double m1, double m2,
                               const DirectionSet& dirs);

/// Basic-state directional intensity sampled at (mu node, z node); used by
/// the perturbed source terms. Row i = mu[i], column j = z node j.
Eigen::MatrixXd steady_directional_intensity(const BasicState& state, const DirectionSet& dirs);

}  // namespace biostab
