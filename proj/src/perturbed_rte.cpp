#include "biostab/perturbed_rte.hpp"

#include <cmath>
#include <complex>
#include <vector>

#include "biostab/errors.hpp"

namespace biostab {

namespace {

using cplx = std::complex<double>;

// psi_j(w) = integral_0^1 e^{-w(1-t)} t^j dt, j = 0..3, for complex w with
// Re w >= 0. Entire-series evaluation below |w| = 8, recurrence above.
void psi_functions(cplx w, cplx psi[4]) {
    if (std::abs(w) <= 8.0) {
        for (int j = 0; j < 4; ++j) {
            cplx term = 1.0 / static_cast<double>(j + 1);
            cplx sum = term;
            for (int m = 1; m <= 64; ++m) {
                term *= -w / static_cast<double>(m + j + 1);
                sum += term;
                if (std::abs(term) < 1e-18 * std::abs(sum)) break;
            }
            psi[j] = sum;
        }
    } else {
        const cplx em = std::exp(-w);
        psi[0] = (1.0 - em) / w;
        for (int j = 1; j < 4; ++j)
            psi[j] = (1.0 - static_cast<double>(j) * psi[j - 1]) / w;
    }
}

// Per-grid geometry for the exact integrating-factor stepping: step sizes,
// per-step optical-depth increments, and cubic source-interpolation stencils
// expressed as monomial coefficients in the marching coordinate.
struct MarchContext {
    int nn = 0;
    std::vector<double> h;     // h[k] = z[k+1] - z[k]
    std::vector<double> dtau;  // tau(z_k) - tau(z_{k+1}) >= 0
    std::vector<int> stencil_lo;
    std::vector<Eigen::Matrix4d> vinv_up, vinv_dn;  // monomial coeffs from nodal values
};

MarchContext build_march_context(const BasicState& state) {
    MarchContext mc;
    const auto& z = state.grid.z;
    mc.nn = static_cast<int>(z.size());
    const int n_steps = mc.nn - 1;
    mc.h.resize(n_steps);
    mc.dtau.resize(n_steps);
    mc.stencil_lo.resize(n_steps);
    mc.vinv_up.resize(n_steps);
    mc.vinv_dn.resize(n_steps);
    for (int k = 0; k < n_steps; ++k) {
        mc.h[k] = z[k + 1] - z[k];
        mc.dtau[k] = std::max(0.0, state.tau_of_z[k] - state.tau_of_z[k + 1]);
        const int lo = std::clamp(k - 1, 0, mc.nn - 4);
        mc.stencil_lo[k] = lo;
        Eigen::Matrix4d v_up, v_dn;
        for (int q = 0; q < 4; ++q) {
            const double su = z[lo + q] - z[k];        // up-march local coordinate
            const double sd = z[k + 1] - z[lo + q];    // down-march local coordinate
            double pu = 1.0, pd = 1.0;
            for (int j = 0; j < 4; ++j) {
                v_up(q, j) = pu;
                v_dn(q, j) = pd;
                pu *= su;
                pd *= sd;
            }
        }
        mc.vinv_up[k] = v_up.inverse();
        mc.vinv_dn[k] = v_dn.inverse();
    }
    return mc;
}

// One direction of the perturbed (or steady) transfer equation, integrated
// with the exponential step. Visits nodes in march order; after each step the
// caller-supplied sink receives the landed node index. Template sinks keep
// the value-march and operator-march on the identical code path.
struct StepWeights {
    cplx decay;
    cplx w[4];
    int lo;
};

class DirectionMarch {
public:
    DirectionMarch(const MarchContext& mc, double mu, cplx phase) : mc_(mc), mu_(mu) {
        up_ = mu > 0.0;
        const double amu = std::fabs(mu);
        const int n_steps = mc_.nn - 1;
        steps_.resize(n_steps);
        for (int k = 0; k < n_steps; ++k) {
            const cplx chi = (phase * mc_.h[k] + mc_.dtau[k]) / amu;
            cplx psi[4];
            psi_functions(chi, psi);
            StepWeights sw;
            sw.decay = std::exp(-chi);
            sw.lo = mc_.stencil_lo[k];
            const Eigen::Matrix4d& vinv = up_ ? mc_.vinv_up[k] : mc_.vinv_dn[k];
            double hp = mc_.h[k];  // h^{j+1}
            cplx ij[4];
            for (int j = 0; j < 4; ++j) {
                ij[j] = hp * psi[j];
                hp *= mc_.h[k];
            }
            for (int q = 0; q < 4; ++q) {
                cplx acc = 0.0;
                for (int j = 0; j < 4; ++j) acc += vinv(j, q) * ij[j];
                sw.w[q] = acc / amu;
            }
            steps_[k] = sw;
        }
    }

    bool upward() const { return up_; }
    int start_node() const { return up_ ? 0 : mc_.nn - 1; }

    /// Applies the march to a concrete source vector.
    void values(const Eigen::VectorXcd& src, cplx boundary, Eigen::VectorXcd& out) const {
        out.resize(mc_.nn);
        cplx psi_val = boundary;
        out(start_node()) = psi_val;
        if (up_) {
            for (int k = 0; k < mc_.nn - 1; ++k) {
                const StepWeights& sw = steps_[k];
                psi_val *= sw.decay;
                for (int q = 0; q < 4; ++q) psi_val += sw.w[q] * src(sw.lo + q);
                out(k + 1) = psi_val;
            }
        } else {
            for (int k = mc_.nn - 2; k >= 0; --k) {
                const StepWeights& sw = steps_[k];
                psi_val *= sw.decay;
                for (int q = 0; q < 4; ++q) psi_val += sw.w[q] * src(sw.lo + q);
                out(k) = psi_val;
            }
        }
    }

    /// Accumulates the dense propagation matrix: out_row(node) = d psi(node) / d src.
    void propagation_matrix(Eigen::MatrixXcd& a) const {
        a.setZero(mc_.nn, mc_.nn);
        Eigen::RowVectorXcd row = Eigen::RowVectorXcd::Zero(mc_.nn);
        if (up_) {
            for (int k = 0; k < mc_.nn - 1; ++k) {
                const StepWeights& sw = steps_[k];
                row *= sw.decay;
                for (int q = 0; q < 4; ++q) row(sw.lo + q) += sw.w[q];
                a.row(k + 1) = row;
            }
        } else {
            for (int k = mc_.nn - 2; k >= 0; --k) {
                const StepWeights& sw = steps_[k];
                row *= sw.decay;
                for (int q = 0; q < 4; ++q) row(sw.lo + q) += sw.w[q];
                a.row(k) = row;
            }
        }
    }

private:
    const MarchContext& mc_;
    double mu_;
    bool up_;
    std::vector<StepWeights> steps_;
};

// Source coefficient vectors for one polar direction: the perturbed source is
// src(z) = cg(z) G1(z) + cs(z) S(z) + ct(z) Theta(z).
struct SourceCoefs {
    Eigen::VectorXd cg, cs, ct;
};

SourceCoefs source_coefs(const BasicState& state, const Eigen::MatrixXd& l_steady, int mu_index,
                         double mu) {
    const ProblemParams& p = state.params;
    const int nn = static_cast<int>(state.grid.z.size());
    const double pref = p.albedo * p.extinction / (4.0 * M_PI);
    SourceCoefs c;
    c.cg.resize(nn);
    c.cs.resize(nn);
    c.ct.resize(nn);
    for (int j = 0; j < nn; ++j) {
        c.cg(j) = pref * state.n_s[j];
        c.cs(j) = pref * p.aniso_coeff * mu * state.n_s[j];
        c.ct(j) = pref * (state.g_s_of_z[j] - p.aniso_coeff * mu * state.q_s_of_z[j]) -
                  p.extinction * l_steady(mu_index, j);
    }
    return c;
}

void check_state(const BasicState& state) {
    if (state.n_s.empty())
        throw ConsistencyError("perturbed_rte: basic state is not solved");
}

// Azimuthal node count for one polar node. The integrand carries the factor
// e^{i a cos(phi - alpha)} with a up to k sqrt(1-mu^2) / |mu| across the layer;
// the periodic trapezoid is exact up to the Bessel tail J_{n_phi}(a), which
// collapses once n_phi exceeds the largest argument. Grazing nodes therefore
// get proportionally more azimuth nodes; this keeps the quadrature exactly
// isotropic in the horizontal wavevector.
int azimuth_count(int base, double k_mag, double mu) {
    const double a_max = k_mag * std::sqrt(std::max(0.0, 1.0 - mu * mu)) / std::fabs(mu);
    const int need = static_cast<int>(std::ceil(1.15 * a_max)) + 18;
    int n = std::max(base, need);
    if (n % 2 != 0) ++n;
    return n;
}

}  // namespace

Eigen::MatrixXd steady_directional_intensity(const BasicState& state, const DirectionSet& dirs) {
    check_state(state);
    const ProblemParams& p = state.params;
    const MarchContext mc = build_march_context(state);
    const int nn = mc.nn;
    Eigen::MatrixXd out(dirs.n_mu(), nn);
    Eigen::VectorXcd src(nn), vals;
    for (int i = 0; i < dirs.n_mu(); ++i) {
        const double mu = dirs.mu[i];
        for (int j = 0; j < nn; ++j) {
            src(j) = (p.albedo * p.extinction * state.n_s[j] / (4.0 * M_PI)) *
                     (state.g_s_of_z[j] - p.aniso_coeff * mu * state.q_s_of_z[j]);
        }
        const cplx boundary = (mu < 0.0) ? cplx(p.diffuse_flux / M_PI, 0.0) : cplx(0.0, 0.0);
        DirectionMarch march(mc, mu, cplx(0.0, 0.0));
        march.values(src, boundary, vals);
        for (int j = 0; j < nn; ++j) out(i, j) = vals(j).real();
    }
    return out;
}

PerturbedMoments solve_perturbed_intensity(std::span<const std::complex<double>> theta,
                                           const BasicState& state, double m1, double m2,
                                           const DirectionSet& dirs, double tol, int max_iter) {
    check_state(state);
    const int nn = static_cast<int>(state.grid.z.size());
    if (static_cast<int>(theta.size()) != nn)
        throw ValidationError("solve_perturbed_intensity: theta must be sampled on the state grid");
    if (!(tol > 0.0)) throw ValidationError("solve_perturbed_intensity: tol must be > 0");

    const MarchContext mc = build_march_context(state);
    const Eigen::MatrixXd l_steady = steady_directional_intensity(state, dirs);

    Eigen::VectorXcd th(nn);
    for (int j = 0; j < nn; ++j) th(j) = theta[j];

    // Precompute per-direction marches and coefficients; azimuthal resolution
    // follows the phase amplitude of each polar node.
    const int nmu = dirs.n_mu();
    const double k_mag = std::hypot(m1, m2);
    std::vector<SourceCoefs> coefs(nmu);
    for (int i = 0; i < nmu; ++i) coefs[i] = source_coefs(state, l_steady, i, dirs.mu[i]);
    std::vector<DirectionMarch> marches;
    std::vector<double> zeta, nu_h, weight, mu_of;
    std::vector<int> mu_index;
    for (int i = 0; i < nmu; ++i) {
        const double st = std::sqrt(std::max(0.0, 1.0 - dirs.mu[i] * dirs.mu[i]));
        const int nphi = azimuth_count(dirs.n_phi(), k_mag, dirs.mu[i]);
        const double w_phi = 2.0 * M_PI / nphi;
        for (int j = 0; j < nphi; ++j) {
            const double phi = 2.0 * M_PI * j / nphi;
            const double zj = st * std::cos(phi);
            const double nj = st * std::sin(phi);
            zeta.push_back(zj);
            nu_h.push_back(nj);
            weight.push_back(dirs.w_mu[i] * w_phi);
            mu_of.push_back(dirs.mu[i]);
            mu_index.push_back(i);
            marches.emplace_back(mc, dirs.mu[i], cplx(0.0, m1 * zj + m2 * nj));
        }
    }
    const std::size_t n_dirs = marches.size();

    PerturbedMoments mom;
    Eigen::VectorXcd g = Eigen::VectorXcd::Zero(nn), s = Eigen::VectorXcd::Zero(nn);
    Eigen::VectorXcd p_acc(nn), q_acc(nn), g_acc(nn), s_acc(nn), src(nn), vals(nn);
    std::vector<double> history;

    for (int it = 0; it < max_iter; ++it) {
        g_acc.setZero();
        s_acc.setZero();
        p_acc.setZero();
        q_acc.setZero();
        for (std::size_t idx = 0; idx < n_dirs; ++idx) {
            const SourceCoefs& c = coefs[mu_index[idx]];
            src = c.cg.cast<cplx>().cwiseProduct(g) + c.cs.cast<cplx>().cwiseProduct(s) +
                  c.ct.cast<cplx>().cwiseProduct(th);
            marches[idx].values(src, cplx(0.0, 0.0), vals);
            const double w = weight[idx];
            g_acc += w * vals;
            s_acc += (w * mu_of[idx]) * vals;
            p_acc += (w * zeta[idx]) * vals;
            q_acc += (w * nu_h[idx]) * vals;
        }
        const double scale = std::max({1.0, g_acc.cwiseAbs().maxCoeff(), s_acc.cwiseAbs().maxCoeff()});
        const double res = std::max((g_acc - g).cwiseAbs().maxCoeff(),
                                    (s_acc - s).cwiseAbs().maxCoeff()) /
                           scale;
        history.push_back(res);
        g = g_acc;
        s = s_acc;
        if (res < tol) {
            mom.converged = true;
            mom.iterations = it + 1;
            break;
        }
    }
    if (!mom.converged)
        throw IterationError("solve_perturbed_intensity: source iteration did not converge",
                             history);

    mom.g1.assign(g.data(), g.data() + nn);
    mom.s.assign(s.data(), s.data() + nn);
    mom.p.assign(p_acc.data(), p_acc.data() + nn);
    mom.q.assign(q_acc.data(), q_acc.data() + nn);
    return mom;
}

MomentOperator moment_operator(const BasicState& state, double m1, double m2,
                               const DirectionSet& dirs) {
    check_state(state);
    const int nn = static_cast<int>(state.grid.z.size());
    const MarchContext mc = build_march_context(state);
    const Eigen::MatrixXd l_steady = steady_directional_intensity(state, dirs);

    Eigen::MatrixXcd m_gg = Eigen::MatrixXcd::Zero(nn, nn), m_gs = m_gg, m_gt = m_gg;
    Eigen::MatrixXcd m_sg = m_gg, m_ss = m_gg, m_st = m_gg;
    Eigen::MatrixXcd m_pg = m_gg, m_ps = m_gg, m_pt = m_gg;
    Eigen::MatrixXcd m_qg = m_gg, m_qs = m_gg, m_qt = m_gg;

    Eigen::MatrixXcd a(nn, nn), b(nn, nn);
    const double k_mag = std::hypot(m1, m2);
    for (int i = 0; i < dirs.n_mu(); ++i) {
        const double mu = dirs.mu[i];
        const double st = std::sqrt(std::max(0.0, 1.0 - mu * mu));
        const SourceCoefs c = source_coefs(state, l_steady, i, mu);
        const int nphi = azimuth_count(dirs.n_phi(), k_mag, mu);
        for (int j = 0; j < nphi; ++j) {
            const double phi = 2.0 * M_PI * j / nphi;
            const double zj = st * std::cos(phi);
            const double nj = st * std::sin(phi);
            const double w = dirs.w_mu[i] * (2.0 * M_PI / nphi);
            DirectionMarch march(mc, mu, cplx(0.0, m1 * zj + m2 * nj));
            march.propagation_matrix(a);

            auto accumulate = [&](const Eigen::VectorXd& coef, Eigen::MatrixXcd& mg,
                                  Eigen::MatrixXcd& ms, Eigen::MatrixXcd& mp,
                                  Eigen::MatrixXcd& mq) {
                b = a * coef.asDiagonal();
                mg += w * b;
                ms += (w * mu) * b;
                mp += (w * zj) * b;
                mq += (w * nj) * b;
            };
            accumulate(c.cg, m_gg, m_sg, m_pg, m_qg);
            accumulate(c.cs, m_gs, m_ss, m_ps, m_qs);
            accumulate(c.ct, m_gt, m_st, m_pt, m_qt);
        }
    }

    // Eliminate the scalar/vertical moment feedback with one dense solve.
    Eigen::MatrixXcd big = Eigen::MatrixXcd::Identity(2 * nn, 2 * nn);
    big.topLeftCorner(nn, nn) -= m_gg;
    big.topRightCorner(nn, nn) -= m_gs;
    big.bottomLeftCorner(nn, nn) -= m_sg;
    big.bottomRightCorner(nn, nn) -= m_ss;
    Eigen::MatrixXcd rhs(2 * nn, nn);
    rhs.topRows(nn) = m_gt;
    rhs.bottomRows(nn) = m_st;
    const Eigen::MatrixXcd x = big.partialPivLu().solve(rhs);

    MomentOperator op;
    op.g_of_theta = x.topRows(nn);
    op.s_of_theta = x.bottomRows(nn);
    op.p_of_theta = m_pg * op.g_of_theta + m_ps * op.s_of_theta + m_pt;
    op.q_of_theta = m_qg * op.g_of_theta + m_qs * op.s_of_theta + m_qt;
    op.m1 = m1;
    op.m2 = m2;
    op.state_hash = state.state_hash;
    return op;
}

}  // namespace biostab
