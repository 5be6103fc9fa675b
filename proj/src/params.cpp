#include "biostab/params.hpp"

#include <cmath>
#include <cstring>

#include "biostab/errors.hpp"

namespace biostab {

namespace {

constexpr double kGravity = 9.81;  // m/s^2, fixed

void require_positive(double v, const char* field) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw ValidationError(std::string("nondimensionalize: ") + field +
                              " must be strictly positive");
}

}  // namespace

std::string to_string(TopBoundary b) {
    return b == TopBoundary::stress_free ? "stress_free" : "rigid";
}

TopBoundary top_boundary_from_string(const std::string& s) {
    if (s == "stress_free") return TopBoundary::stress_free;
    if (s == "rigid") return TopBoundary::rigid;
    throw ValidationError("top_boundary must be \"stress_free\" or \"rigid\", got \"" + s + "\"");
}

void ProblemParams::validate() const {
    if (!(schmidt > 0.0)) throw ValidationError("ProblemParams: schmidt must be > 0");
    if (!(swim_speed > 0.0)) throw ValidationError("ProblemParams: swim_speed must be > 0");
    if (!(extinction > 0.0)) throw ValidationError("ProblemParams: extinction must be > 0");
    if (!(albedo >= 0.0 && albedo <= 1.0))
        throw ValidationError("ProblemParams: albedo must be in [0, 1]");
    if (!(aniso_coeff >= -1.0 && aniso_coeff <= 1.0))
        throw ValidationError("ProblemParams: aniso_coeff must be in [-1, 1]");
    if (!(diffuse_flux >= 0.0)) throw ValidationError("ProblemParams: diffuse_flux must be >= 0");
    if (!(critical_intensity > 0.0))
        throw ValidationError("ProblemParams: critical_intensity must be > 0");
}

std::uint64_t hash_doubles(const double* data, int count) {
    std::uint64_t h = 1469598103934665603ull;  // FNV offset basis
    for (int i = 0; i < count; ++i) {
        std::uint64_t bits;
        std::memcpy(&bits, &data[i], sizeof(bits));
        for (int b = 0; b < 8; ++b) {
            h ^= (bits >> (8 * b)) & 0xffu;
            h *= 1099511628211ull;  // FNV prime
        }
    }
    return h;
}

std::uint64_t ProblemParams::radiative_hash() const {
    const double v[4] = {albedo, aniso_coeff, diffuse_flux, extinction};
    return hash_doubles(v, 4);
}

NondimensionalNumbers nondimensionalize(const DimensionalInputs& in) {
    require_positive(in.depth, "depth");
    require_positive(in.cell_volume, "cell_volume");
    require_positive(in.density_offset, "density_offset");
    require_positive(in.diffusivity, "diffusivity");
    require_positive(in.kinematic_viscosity, "kinematic_viscosity");
    require_positive(in.mean_concentration, "mean_concentration");
    require_positive(in.extinction_per_cell, "extinction_per_cell");
    if (!(in.cell_speed >= 0.0) || !std::isfinite(in.cell_speed))
        throw ValidationError("nondimensionalize: cell_speed must be non-negative");

    NondimensionalNumbers out;
    out.schmidt = in.kinematic_viscosity / in.diffusivity;
    out.swim_speed = in.cell_speed * in.depth / in.diffusivity;
    out.extinction = in.extinction_per_cell * in.mean_concentration * in.depth;
    out.rayleigh = in.mean_concentration * in.cell_volume * kGravity * in.density_offset *
                   in.depth * in.depth * in.depth /
                   (in.kinematic_viscosity * in.diffusivity);
    return out;
}

}  // namespace biostab
