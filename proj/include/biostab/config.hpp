#pragma once

#include <map>
#include <string>

#include "biostab/params.hpp"

namespace biostab {

/// Numerical settings shared by the solver pipeline.
struct NumericsConfig {
    int n_z = 64;      // Chebyshev polynomial degree (n_z + 1 collocation nodes)
    int n_mu = 48;     // polar direction nodes, split equally between hemispheres
    int n_phi = 24;    // uniform azimuthal nodes
    double tol_fredholm = 1e-9;
    double tol_eigen = 1e-8;   // |max Re sigma| tolerance at neutrality
    double k_min = 0.6;
    double k_max = 6.0;
    double k_step = 0.25;
};

struct CaseConfig {
    ProblemParams params;
    NumericsConfig numerics;
    /// Canonical key=value snapshot of everything above, for manifests.
    std::map<std::string, std::string> snapshot() const;
};

/// Parses the flat key-value config format. Recognized keys:
///   schmidt, vc, tau_h, omega, a_coeff, b_flux, g_c, top_boundary,
///   n_z, n_mu, n_phi, tol_fredholm, tol_eigen, k_min, k_max, k_step.
/// Lines are `key = value`; '#' starts a comment. Missing keys keep their
/// defaults; unknown keys raise ValidationError listing all of them.
CaseConfig parse_config_text(const std::string& text);

/// Reads and parses a config file; throws ValidationError on I/O failure.
CaseConfig load_config(const std::string& path);

}  // namespace biostab
