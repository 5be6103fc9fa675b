#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "biostab/chebyshev.hpp"
#include "biostab/params.hpp"
#include "biostab/radiative.hpp"
#include "biostab/taxis.hpp"

namespace biostab {

/// Steady concentration profile and the derived stability coefficients on a
/// Chebyshev collocation grid. Immutable after construction.
struct BasicState {
    ChebyshevGrid grid;
    ProblemParams params;  // governing numbers the state was built for
    RadiativeField field;  // radiative field the state was built against

    std::vector<double> n_s;       // mean-normalized concentration
    std::vector<double> tau_of_z;  // tau(z) = integral_z^1 tau_H n_s dz'
    std::vector<double> g_s_of_z;
    std::vector<double> q_s_of_z;
    std::vector<double> dn_s_dz;   // V_c M_s n_s, from the governing balance

    // Filled by derive_coefficients:
    std::vector<double> m_s;       // taxis value at G_s(z)
    std::vector<double> dm_dg;     // taxis derivative at G_s(z)
    std::vector<double> upsilon1;  // V_c dM/dG dG_s/dz
    std::vector<double> upsilon2;  // V_c M_s
    bool coefficients_ready = false;

    double top_value = 1.0;         // converged n_s at z = 1
    std::uint64_t params_hash = 0;  // radiative hash (omega, A, B, tau_H)
    std::uint64_t state_hash = 0;   // adds V_c, G_c and the taxis id
};

/// Shooting solve of dn_s/dz = V_c M(G_s(tau)) n_s, dtau/dz = -tau_H n_s,
/// integrated downward from (z=1, tau=0) with Newton iteration on n_s(1)
/// until the mean concentration is 1 within tol. n_z is the Chebyshev degree
/// of the output grid (n_z + 1 nodes, so n_z >= 64 gives >= 65 nodes).
BasicState solve_basic_state(const ProblemParams& p, const RadiativeField& field,
                             const TaxisFunction& taxis, int n_z = 64, double tol = 1e-8);

/// Fills m_s, dm_dg, upsilon1, upsilon2 from the taxis function and the
/// differentiated field interpolant (chain rule through tau(z)).
BasicState derive_coefficients(BasicState state, const ProblemParams& p,
                               const TaxisFunction& taxis);

/// Convenience: solve + derive.
BasicState make_basic_state(const ProblemParams& p, const RadiativeField& field,
                            const TaxisFunction& taxis, int n_z = 64, double tol = 1e-8);

/// Integrates the concentration/optical-depth system downward from z = 1 with
/// n_s(1) = top_value, landing on the (descending) z nodes. State components:
/// {n_s, tau, integral of n_s from z to 1}. Shared by the solver and by
/// residual checks in tests.
std::vector<std::array<double, 3>> integrate_concentration(const ProblemParams& p,
                                                           const RadiativeField& field,
                                                           const TaxisFunction& taxis,
                                                           double top_value,
                                                           std::span<const double> z_desc);

}  // namespace biostab
