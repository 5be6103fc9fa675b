#include "biostab/basic_state.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include "biostab/errors.hpp"
#include "biostab/ode.hpp"

namespace biostab {

namespace {

double clamped_g(const RadiativeField& field, double tau) {
    const double t = std::clamp(tau, 0.0, field.tau_h());
    return field.g_spline.value(t);
}

std::uint64_t combine_state_hash(const ProblemParams& p, const TaxisFunction& taxis) {
    const double v[3] = {p.swim_speed, p.critical_intensity,
                         static_cast<double>(p.top_boundary == TopBoundary::rigid)};
    std::uint64_t h = p.radiative_hash() ^ hash_doubles(v, 3);
    for (unsigned char ch : taxis.id) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace

std::vector<std::array<double, 3>> integrate_concentration(const ProblemParams& p,
                                                           const RadiativeField& field,
                                                           const TaxisFunction& taxis,
                                                           double top_value,
                                                           std::span<const double> z_desc) {
    const double tau_h = p.extinction;
    const double vc = p.swim_speed;
    auto rhs = [&](double /*z*/, const std::array<double, 3>& y, std::array<double, 3>& dy) {
        const double n = y[0];
        if (!std::isfinite(n) || n > 1e14)
            throw ShootingError("integrate_concentration: concentration diverged", top_value, n);
        const double m = taxis.value(clamped_g(field, y[1]));
        dy[0] = vc * m * n;
        dy[1] = -tau_h * n;
        dy[2] = -n;  // d/dz of integral_z^1 n dz'
    };
    return integrate_rk45<3>(rhs, {top_value, 0.0, 0.0}, z_desc, 1e-10, 1e-13);
}

BasicState solve_basic_state(const ProblemParams& p, const RadiativeField& field,
                             const TaxisFunction& taxis, int n_z, double tol) {
    p.validate();
    if (field.params_hash != p.radiative_hash())
        throw ConsistencyError("solve_basic_state: radiative field was built for different params");
    if (std::fabs(taxis.critical_intensity - p.critical_intensity) >
        1e-12 * std::max(1.0, p.critical_intensity))
        throw ConsistencyError("solve_basic_state: taxis critical intensity != params.g_c");
    if (n_z < 64) throw ValidationError("solve_basic_state: n_z must be >= 64 (>= 65 nodes)");
    if (!(tol > 0.0)) throw ValidationError("solve_basic_state: tol must be > 0");

    const std::array<double, 2> endpoints = {1.0, 0.0};

    // Mean-concentration defect as a function of the top value.
    auto defect = [&](double alpha) -> double {
        try {
            const auto states = integrate_concentration(p, field, taxis, alpha, endpoints);
            return states.back()[2] - 1.0;  // integral - 1
        } catch (const ShootingError&) {
            return std::numeric_limits<double>::infinity();
        }
    };

    double alpha = 1.0;
    double f = defect(alpha);
    bool converged = std::fabs(f) < 0.1 * tol;
    double best_alpha = alpha, best_f = f;

    // Newton with a one-sided finite-difference derivative.
    for (int it = 0; it < 60 && !converged; ++it) {
        if (!std::isfinite(f)) break;
        const double step = 1e-7 * std::max(1.0, alpha);
        const double f2 = defect(alpha + step);
        const double deriv = (f2 - f) / step;
        if (!std::isfinite(deriv) || deriv == 0.0) break;
        const double next = alpha - f / deriv;
        if (!(next > 0.0)) break;  // left the positive cone; fall back to bisection
        alpha = next;
        f = defect(alpha);
        if (std::fabs(f) < std::fabs(best_f)) {
            best_alpha = alpha;
            best_f = f;
        }
        converged = std::fabs(f) < 0.1 * tol;
    }

    if (!converged) {
        // Bisection fallback with adaptive bracket expansion.
        double lo = 1e-4, hi = 1e3;
        double flo = defect(lo), fhi = defect(hi);
        for (int g = 0; g < 8 && !(flo < 0.0); ++g) {
            lo /= 100.0;
            flo = defect(lo);
        }
        for (int g = 0; g < 8 && !(fhi > 0.0); ++g) {
            hi *= 10.0;
            fhi = defect(hi);
        }
        if (!(flo < 0.0 && fhi > 0.0))
            throw ShootingError("solve_basic_state: could not bracket the mean-concentration root",
                                best_alpha, best_f);
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = defect(mid);
            if (std::isfinite(fm) && std::fabs(fm) < 0.1 * tol) {
                alpha = mid;
                f = fm;
                converged = true;
                break;
            }
            if (fm > 0.0) hi = mid; else lo = mid;
            if (hi - lo < 1e-15 * std::max(1.0, hi)) break;
        }
        if (!converged)
            throw ShootingError("solve_basic_state: bisection failed to reach tolerance",
                                0.5 * (lo + hi), f);
    }

    BasicState s;
    s.grid = make_chebyshev_grid(n_z);
    s.params = p;
    s.field = field;
    s.top_value = alpha;
    s.params_hash = p.radiative_hash();
    s.state_hash = combine_state_hash(p, taxis);

    const int nn = n_z + 1;
    std::vector<double> z_desc(s.grid.z.rbegin(), s.grid.z.rend());
    const auto states = integrate_concentration(p, field, taxis, alpha, z_desc);

    s.n_s.resize(nn);
    s.tau_of_z.resize(nn);
    s.g_s_of_z.resize(nn);
    s.q_s_of_z.resize(nn);
    s.dn_s_dz.resize(nn);
    const double tau_h = p.extinction;
    for (int j = 0; j < nn; ++j) {
        const int idx = nn - 1 - j;  // states run from z=1 down; grid ascends
        const double n = states[idx][0];
        const double tau = std::clamp(states[idx][1], 0.0, tau_h);
        s.n_s[j] = n;
        s.tau_of_z[j] = tau;
        s.g_s_of_z[j] = field.g_spline.value(tau);
        s.q_s_of_z[j] = field.q_spline.value(tau);
        s.dn_s_dz[j] = p.swim_speed * taxis.value(s.g_s_of_z[j]) * n;
        if (!(n > 0.0))
            throw ShootingError("solve_basic_state: nonpositive concentration in converged profile",
                                alpha, n);
    }
    return s;
}

BasicState derive_coefficients(BasicState state, const ProblemParams& p,
                               const TaxisFunction& taxis) {
    if (state.params_hash != p.radiative_hash())
        throw ConsistencyError("derive_coefficients: state was built for different params");
    const int nn = state.grid.degree + 1;
    state.m_s.resize(nn);
    state.dm_dg.resize(nn);
    state.upsilon1.resize(nn);
    state.upsilon2.resize(nn);
    const double tau_h = p.extinction;
    for (int j = 0; j < nn; ++j) {
        const double g = state.g_s_of_z[j];
        state.m_s[j] = taxis.value(g);
        state.dm_dg[j] = taxis.derivative(g);
        const double dg_dtau = state.field.g_spline.derivative(
            std::clamp(state.tau_of_z[j], 0.0, tau_h));
        const double dg_dz = -tau_h * state.n_s[j] * dg_dtau;
        state.upsilon1[j] = p.swim_speed * state.dm_dg[j] * dg_dz;
        state.upsilon2[j] = p.swim_speed * state.m_s[j];
    }
    state.coefficients_ready = true;
    return state;
}

BasicState make_basic_state(const ProblemParams& p, const RadiativeField& field,
                            const TaxisFunction& taxis, int n_z, double tol) {
    return derive_coefficients(solve_basic_state(p, field, taxis, n_z, tol), p, taxis);
}

}  // namespace biostab
