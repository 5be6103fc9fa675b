#include "biostab/radiative.hpp"

#include <cmath>
#include <complex>
#include <vector>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <Eigen/Dense>

#include "biostab/errors.hpp"
#include "biostab/expint.hpp"

namespace biostab {

namespace {

std::vector<double> simpson_weights(int n, double h) {
    // n odd: composite Simpson over (n-1)/2 panels.
    std::vector<double> w(n, 0.0);
    for (int i = 0; i + 2 < n; i += 2) {
        w[i] += h / 3.0;
        w[i + 1] += 4.0 * h / 3.0;
        w[i + 2] += h / 3.0;
    }
    return w;
}

struct Kernels {
    // Off-diagonal quadrature weights (weight * kernel) and the subtracted
    // diagonal coefficients (primitive minus off-diagonal row sum).
    Eigen::MatrixXd k1, k2, k3;     // k2 carries the sgn factor
    Eigen::VectorXd d1, d2, d3;
};

Kernels build_kernels(const std::vector<double>& tau, const std::vector<double>& w, double tau_h) {
    const int n = static_cast<int>(tau.size());
    // Uniform grid: the kernels depend on |i - j| only.
    const double h = tau[1] - tau[0];
    std::vector<double> e1(n, 0.0), e2(n, 0.0), e3(n, 0.0);
    for (int d = 1; d < n; ++d) {
        e1[d] = expint(1, d * h);
        e2[d] = expint(2, d * h);
        e3[d] = expint(3, d * h);
    }
    Kernels kr;
    kr.k1.setZero(n, n);
    kr.k2.setZero(n, n);
    kr.k3.setZero(n, n);
    kr.d1.resize(n);
    kr.d2.resize(n);
    kr.d3.resize(n);
    for (int i = 0; i < n; ++i) {
        double s1 = 0.0, s2 = 0.0, s3 = 0.0;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const int ad = std::abs(i - j);
            const double sgn = i > j ? 1.0 : -1.0;
            kr.k1(i, j) = w[j] * e1[ad];
            kr.k2(i, j) = w[j] * e2[ad] * sgn;
            kr.k3(i, j) = w[j] * e3[ad];
            s1 += kr.k1(i, j);
            s2 += kr.k2(i, j);
            s3 += kr.k3(i, j);
        }
        kr.d1(i) = kernel_primitive_E1(tau[i], tau_h) - s1;
        kr.d2(i) = kernel_primitive_E2_signed(tau[i], tau_h) - s2;
        kr.d3(i) = kernel_primitive_E3(tau[i], tau_h) - s3;
    }
    return kr;
}

// Applies the integral operator: out = (omega/2) * [K1 g + A K2 q; K2 g + A K3 q]
// with the subtracted diagonals folded back in.
void apply_scattering(const Kernels& kr, double omega, double aniso,
                      const Eigen::VectorXd& g, const Eigen::VectorXd& q,
                      Eigen::VectorXd& out_g, Eigen::VectorXd& out_q) {
    const double half_omega = 0.5 * omega;
    out_g = half_omega * (kr.k1 * g + kr.d1.cwiseProduct(g) +
                          aniso * (kr.k2 * q + kr.d2.cwiseProduct(q)));
    out_q = half_omega * (kr.k2 * g + kr.d2.cwiseProduct(g) +
                          aniso * (kr.k3 * q + kr.d3.cwiseProduct(q)));
}

}  // namespace

RadiativeField solve_fredholm(const ProblemParams& p, int n_nodes, double tol) {
    p.validate();
    if (n_nodes < 33 || n_nodes % 2 == 0)
        throw ValidationError("solve_fredholm: n_nodes must be odd and >= 33");
    if (!(tol > 0.0)) throw ValidationError("solve_fredholm: tol must be > 0");

    const int n = n_nodes;
    const double tau_h = p.extinction;
    const double h = tau_h / (n - 1);
    std::vector<double> tau(n);
    for (int i = 0; i < n; ++i) tau[i] = i * h;
    const std::vector<double> w = simpson_weights(n, h);

    Eigen::VectorXd rhs_g(n), rhs_q(n);
    for (int i = 0; i < n; ++i) {
        rhs_g(i) = 2.0 * p.diffuse_flux * expint(2, tau[i]);
        rhs_q(i) = 2.0 * p.diffuse_flux * expint(3, tau[i]);
    }

    const Kernels kr = build_kernels(tau, w, tau_h);
    const double omega = p.albedo;
    const double aniso = p.aniso_coeff;

    Eigen::VectorXd g(n), q(n);
    if (n <= 4096) {
        // Direct solve of the coupled 2n x 2n system.
        const int m = 2 * n;
        Eigen::MatrixXd mat = Eigen::MatrixXd::Zero(m, m);
        const double ho = 0.5 * omega;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const double diag = (i == j) ? 1.0 : 0.0;
                const double k1 = (i == j) ? kr.d1(i) : kr.k1(i, j);
                const double k2 = (i == j) ? kr.d2(i) : kr.k2(i, j);
                const double k3 = (i == j) ? kr.d3(i) : kr.k3(i, j);
                mat(i, j) = diag - ho * k1;
                mat(i, n + j) = -ho * aniso * k2;
                mat(n + i, j) = -ho * k2;
                mat(n + i, n + j) = diag - ho * aniso * k3;
            }
        }
        Eigen::VectorXd sol(m);
        sol.head(n) = rhs_g;
        sol.tail(n) = rhs_q;
        std::vector<lapack_int> ipiv(m);
        const lapack_int info = LAPACKE_dgesv(LAPACK_COL_MAJOR, m, 1, mat.data(), m,
                                              ipiv.data(), sol.data(), m);
        if (info != 0)
            throw NumericError("solve_fredholm: dgesv failed, info = " + std::to_string(info));
        g = sol.head(n);
        q = sol.tail(n);
    } else {
        // Fixed-point sweeps; the scattering operator is a contraction for
        // omega < 1 in an optically thin layer.
        g = rhs_g;
        q = rhs_q;
        std::vector<double> history;
        const int max_iter = 500;
        bool converged = false;
        Eigen::VectorXd sg(n), sq(n);
        for (int it = 0; it < max_iter; ++it) {
            apply_scattering(kr, omega, aniso, g, q, sg, sq);
            const Eigen::VectorXd g_new = rhs_g + sg;
            const Eigen::VectorXd q_new = rhs_q + sq;
            const double delta = std::max((g_new - g).cwiseAbs().maxCoeff(),
                                          (q_new - q).cwiseAbs().maxCoeff());
            history.push_back(delta);
            g = g_new;
            q = q_new;
            if (delta < tol) {
                converged = true;
                break;
            }
        }
        if (!converged)
            throw IterationError("solve_fredholm: fixed-point iteration did not converge", history);
    }

    // Residual of both equations under the same quadrature.
    {
        Eigen::VectorXd sg(n), sq(n);
        apply_scattering(kr, omega, aniso, g, q, sg, sq);
        const double res = std::max((g - rhs_g - sg).cwiseAbs().maxCoeff(),
                                    (q - rhs_q - sq).cwiseAbs().maxCoeff());
        if (!(res < std::max(tol, 1e-10)))
            throw NumericError("solve_fredholm: residual " + std::to_string(res) +
                               " exceeds tolerance");
    }

    if (p.diffuse_flux > 0.0) {
        for (int i = 0; i < n; ++i)
            if (!(g(i) > 0.0) || !(q(i) > 0.0))
                throw NumericError("solve_fredholm: nonpositive intensity or flux in solution");
    }

    RadiativeField f;
    f.tau_grid = tau;
    f.g_s.assign(g.data(), g.data() + n);
    f.q_s.assign(q.data(), q.data() + n);
    f.params_hash = p.radiative_hash();
    f.g_spline = CubicSpline(f.tau_grid, f.g_s);
    f.q_spline = CubicSpline(f.tau_grid, f.q_s);
    return f;
}

UniformProfile uniform_suspension_profile(const ProblemParams& p, int n_points) {
    if (n_points < 2) throw ValidationError("uniform_suspension_profile: n_points must be >= 2");
    const RadiativeField f = solve_fredholm(p);
    UniformProfile out;
    out.z.resize(n_points);
    out.tau.resize(n_points);
    out.g_s.resize(n_points);
    out.q_s.resize(n_points);
    for (int i = 0; i < n_points; ++i) {
        const double z = static_cast<double>(i) / (n_points - 1);
        const double tau = p.extinction * (1.0 - z);
        const FieldSample s = interpolate_field(f, tau);
        out.z[i] = z;
        out.tau[i] = tau;
        out.g_s[i] = s.g_s;
        out.q_s[i] = s.q_s;
    }
    return out;
}

FieldSample interpolate_field(const RadiativeField& f, double tau) {
    if (!(tau >= 0.0 && tau <= f.tau_h()))
        throw DomainError("interpolate_field: tau outside [0, tau_H]");
    return {f.g_spline.value(tau), f.q_spline.value(tau)};
}

double field_dg_dtau(const RadiativeField& f, double tau) {
    if (!(tau >= 0.0 && tau <= f.tau_h()))
        throw DomainError("field_dg_dtau: tau outside [0, tau_H]");
    return f.g_spline.derivative(tau);
}

}  // namespace biostab
