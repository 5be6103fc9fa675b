#pragma once

#include <cstdint>
#include <string>

namespace biostab {

enum class TopBoundary { stress_free, rigid };

std::string to_string(TopBoundary b);
TopBoundary top_boundary_from_string(const std::string& s);

/// Nondimensional governing numbers for one case.
/// The bottom boundary is always rigid; only the top boundary is selectable.
struct ProblemParams {
    double schmidt = 20.0;            // S_c, momentum/cell diffusivity ratio
    double swim_speed = 20.0;         // V_c, scaled cell swimming speed
    double extinction = 0.5;          // tau_H, optical thickness of the layer
    double albedo = 0.7;              // omega in [0, 1]
    double aniso_coeff = 0.0;         // A in [-1, 1]; forward scattering for A > 0
    double diffuse_flux = 0.5;        // B, top-boundary diffuse flux magnitude
    double critical_intensity = 1.0;  // G_c
    TopBoundary top_boundary = TopBoundary::stress_free;

    /// Throws ValidationError naming the first offending field.
    void validate() const;

    /// Identifies the radiative inputs (omega, A, B, tau_H) of this case.
    std::uint64_t radiative_hash() const;
};

/// Dimensional description of a suspension, SI units.
struct DimensionalInputs {
    double depth;                // H [m]
    double cell_volume;          // v [m^3]
    double density_offset;       // delta rho / rho [-]
    double diffusivity;          // D [m^2/s]
    double kinematic_viscosity;  // nu [m^2/s]
    double mean_concentration;   // n_bar [1/m^3]
    double cell_speed;           // W_c [m/s]
    double extinction_per_cell;  // kappa [m^2]
};

struct NondimensionalNumbers {
    double schmidt;     // nu / D
    double swim_speed;  // W_c H / D
    double extinction;  // kappa n_bar H
    double rayleigh;    // n_bar v g (delta rho/rho) H^3 / (nu D), g = 9.81 m/s^2
};

/// Converts dimensional inputs to the governing numbers. All inputs must be
/// strictly positive; violations raise ValidationError naming the field.
NondimensionalNumbers nondimensionalize(const DimensionalInputs& in);

/// FNV-1a over raw bytes; stable across runs for identical inputs.
std::uint64_t hash_doubles(const double* data, int count);

}  // namespace biostab
