#include "biostab/taxis.hpp"

#include <cmath>
#include <sstream>

#include "biostab/errors.hpp"

namespace biostab {

TaxisFunction default_taxis(double g_c, const TaxisShape& shape) {
    if (!(g_c > 0.0)) throw ValidationError("default_taxis: critical_intensity g_c must be > 0");
    if (!(shape.amplitude > 0.0 && shape.amplitude <= 1.0))
        throw ValidationError("default_taxis: amplitude must be in (0, 1]");
    // The damping window keeps the response negative on all of (g_c, 3 g_c]:
    // the argument must stay inside (pi, 2 pi) there. The sharpness cap keeps
    // the argument above pi out to 3 g_c (the downward recrossing of the
    // response argument sits beyond (3 g_c)^sharpness for sharpness <= 2).
    if (!(shape.damping >= 0.21 && shape.damping <= 0.33))
        throw ValidationError("default_taxis: damping must be in [0.21, 0.33]");
    if (!(shape.sharpness >= 1.0 && shape.sharpness <= 2.0))
        throw ValidationError("default_taxis: sharpness must be in [1, 2]");
    {
        // The response argument must stay above pi out to 3 g_c: the argument
        // recrosses 2/3 downward at y_star with y_star exp(damping (1 - y_star)) = 1.
        double lo = 1.5, hi = 60.0;
        for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid * std::exp(shape.damping * (1.0 - mid)) > 1.0) lo = mid; else hi = mid;
        }
        if (std::pow(3.0, shape.sharpness) >= lo)
            throw ValidationError(
                "default_taxis: (damping, sharpness) pair loses the negative branch below 3 g_c");
    }

    const double amp = shape.amplitude;
    const double beta = shape.damping;
    const double sharp = shape.sharpness;
    const double three_half_pi = 1.5 * M_PI;

    TaxisFunction t;
    t.critical_intensity = g_c;
    t.value = [=](double g) {
        const double y = std::pow(g / g_c, sharp);
        const double chi = (2.0 / 3.0) * y * std::exp(beta * (1.0 - y));
        return amp * std::sin(three_half_pi * chi);
    };
    t.derivative = [=](double g) {
        const double x = g / g_c;
        const double y = std::pow(x, sharp);
        const double e = std::exp(beta * (1.0 - y));
        const double chi = (2.0 / 3.0) * y * e;
        const double dy_dg = x > 0.0 ? sharp * y / (x * g_c) : (sharp == 1.0 ? 1.0 / g_c : 0.0);
        const double dchi_dg = (2.0 / 3.0) * e * (1.0 - beta * y) * dy_dg;
        return amp * std::cos(three_half_pi * chi) * three_half_pi * dchi_dg;
    };
    std::ostringstream id;
    id << "sine-response(amp=" << amp << ",damping=" << beta << ",sharpness=" << sharp
       << ",g_c=" << g_c << ")";
    t.id = id.str();
    return t;
}

}  // namespace biostab
