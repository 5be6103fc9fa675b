#pragma once

#include <cstdint>
#include <vector>

#include "biostab/params.hpp"
#include "biostab/spline.hpp"

namespace biostab {

/// Steady total intensity G_s and flux magnitude q_s on an optical-depth grid.
/// The flux vector points downward; q_s stores its (positive) magnitude.
/// Immutable once returned by the solver.
struct RadiativeField {
    std::vector<double> tau_grid;  // ascending nodes in [0, tau_H]
    std::vector<double> g_s;
    std::vector<double> q_s;
    std::uint64_t params_hash = 0;  // radiative_hash of (omega, A, B, tau_H)

    CubicSpline g_spline, q_spline;

    double tau_h() const { return tau_grid.back(); }
};

struct FieldSample {
    double g_s, q_s;
};

/// Solves the coupled integral equations for (G_s, q_s) on [0, tau_H] by a
/// Nystrom discretization: composite Simpson weights on a uniform grid with
/// the singular/kinked kernel parts folded into closed-form primitives.
/// n_nodes must be odd and >= 33. The assembled 2n x 2n system is solved
/// directly for n_nodes <= 4096 and by fixed-point sweeps above that.
RadiativeField solve_fredholm(const ProblemParams& p, int n_nodes = 201, double tol = 1e-9);

/// Intensity profile of a uniform suspension (n_s == 1, tau = tau_H (1 - z)),
/// reported on an ascending z-grid.
struct UniformProfile {
    std::vector<double> z, tau, g_s, q_s;
};
UniformProfile uniform_suspension_profile(const ProblemParams& p, int n_points = 201);

/// Cubic interpolation of the nodal field; exact at nodes.
/// Throws DomainError for tau outside [0, tau_H].
FieldSample interpolate_field(const RadiativeField& f, double tau);

/// dG_s/dtau of the interpolant (used for chain-rule derivatives in z).
double field_dg_dtau(const RadiativeField& f, double tau);

}  // namespace biostab
