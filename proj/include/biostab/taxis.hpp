#pragma once

#include <functional>
#include <string>

namespace biostab {

/// Phototactic response M(G): positive (upward swimming) below the critical
/// intensity, negative above it, |M| <= 1. The solver treats this as a
/// pluggable interface; any object with consistent value/derivative works.
struct TaxisFunction {
    std::function<double(double)> value;       // G -> M(G)
    std::function<double(double)> derivative;  // G -> dM/dG
    double critical_intensity = 1.0;           // zero crossing G_c
    std::string id;                            // recorded in run manifests
};

/// Shape record for the shipped default response curve, so an alternative
/// published curve can be swapped in without touching solver code.
struct TaxisShape {
    double amplitude = 0.8;  // peak |M|, in (0, 1]
    double damping = 0.25;   // exponential damping of the response argument
    double sharpness = 1.0;  // crossing steepness exponent, in [1, 2]
};

/// Default response curve
///   M(G) = amplitude * sin( (3*pi/2) * chi ),
///   chi  = (2/3) y exp(damping (1 - y)),  y = (G / g_c)^sharpness.
/// Single zero at G = g_c, positive below, negative above through at least
/// 3 g_c, with an analytic derivative. The crossing slope is
/// -amplitude * pi * (1 - damping) * sharpness / g_c.
TaxisFunction default_taxis(double g_c, const TaxisShape& shape = {});

}  // namespace biostab
