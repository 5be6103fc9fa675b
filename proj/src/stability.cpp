#include "biostab/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "biostab/errors.hpp"
#include "biostab/log.hpp"

namespace biostab {

namespace {

using cplx = std::complex<double>;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

Eigen::VectorXd to_vec(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<long>(v.size()));
}

/// Canonical normalization: unit magnitude and zero phase at the node where
/// the dominant block peaks. Keeps emitted eigenfunctions deterministic.
void normalize_pair(Eigenpair& ep) {
    int iw = 0, it = 0;
    const double wmax = ep.w.cwiseAbs().maxCoeff(&iw);
    const double tmax = ep.theta.cwiseAbs().maxCoeff(&it);
    const cplx pivot = (wmax >= 1e-12 * std::max(1.0, tmax)) ? ep.w(iw) : ep.theta(it);
    if (std::abs(pivot) == 0.0) throw NumericError("normalize_pair: near-zero eigenvector");
    ep.w /= pivot;
    ep.theta /= pivot;
}

struct FilteredSpectrum {
    std::vector<Eigenpair> pairs;  // sorted by Re sigma descending
};

bool keep_eigenvector(const Eigen::VectorXcd& x, int nn, const SpectrumOptions& opts) {
    const double total = x.squaredNorm();
    if (total <= 0.0) return false;
    double near_wall = 0.0;
    for (int block = 0; block * nn < static_cast<int>(x.size()); ++block) {
        near_wall += std::norm(x(block * nn + 1));
        near_wall += std::norm(x(block * nn + nn - 2));
    }
    return near_wall <= opts.boundary_energy_max * total;
}

FilteredSpectrum solve_spectrum(const StabilityOperator& op, double rayleigh,
                                const SpectrumOptions& opts) {
    const int m = static_cast<int>(op.a0.rows());
    const int nn = op.nn;
    FilteredSpectrum out;
    out.pairs.reserve(m);

    auto admit = [&](cplx alpha_c, cplx beta_c, const Eigen::VectorXcd& x) {
        if (std::abs(beta_c) < 1e-14 * std::max(1.0, std::abs(alpha_c))) return;
        const cplx sigma = alpha_c / beta_c;
        if (!std::isfinite(sigma.real()) || !std::isfinite(sigma.imag())) return;
        if (std::abs(sigma) > opts.sigma_cutoff) return;
        if (!keep_eigenvector(x, nn, opts)) return;
        Eigenpair ep;
        ep.sigma = sigma;
        ep.w = x.head(nn);
        ep.theta = x.tail(nn);
        normalize_pair(ep);
        out.pairs.push_back(std::move(ep));
    };

    // The axial-wavenumber reduction leaves a real pencil; the real QZ keeps
    // conjugate pairs exactly paired and runs measurably faster. The general
    // (m1, m2) path stays complex.
    const double imag_scale = op.a0.imag().cwiseAbs().maxCoeff() +
                              op.a_r.imag().cwiseAbs().maxCoeff() +
                              op.b.imag().cwiseAbs().maxCoeff();
    const double real_scale = op.a0.real().cwiseAbs().maxCoeff();
    if (imag_scale < 1e-12 * real_scale) {
        Eigen::MatrixXd a = (op.a0 + rayleigh * op.a_r).real();
        Eigen::MatrixXd b = op.b.real();
        Eigen::VectorXd ar(m), ai(m), beta(m);
        Eigen::MatrixXd vr(m, m);
        const lapack_int info =
            LAPACKE_dggev(LAPACK_COL_MAJOR, 'N', 'V', m, a.data(), m, b.data(), m, ar.data(),
                          ai.data(), beta.data(), nullptr, 1, vr.data(), m);
        if (info != 0)
            throw NumericError("growth_spectrum: dggev failed, info = " + std::to_string(info) +
                               " (pencil scale " + std::to_string(real_scale) + ")");
        for (int i = 0; i < m; ++i) {
            if (ai(i) == 0.0) {
                admit(cplx(ar(i), 0.0), cplx(beta(i), 0.0), vr.col(i).cast<cplx>());
            } else if (ai(i) > 0.0 && i + 1 < m) {
                // Conjugate pair packed in two consecutive real columns.
                const Eigen::VectorXcd xp = vr.col(i).cast<cplx>() + cplx(0.0, 1.0) * vr.col(i + 1);
                const Eigen::VectorXcd xm = vr.col(i).cast<cplx>() - cplx(0.0, 1.0) * vr.col(i + 1);
                admit(cplx(ar(i), ai(i)), cplx(beta(i), 0.0), xp);
                admit(cplx(ar(i + 1), ai(i + 1)), cplx(beta(i + 1), 0.0), xm);
                ++i;
            }
        }
    } else {
        Eigen::MatrixXcd a = op.a0 + rayleigh * op.a_r;
        Eigen::MatrixXcd b = op.b;
        Eigen::VectorXcd alpha(m), beta(m);
        Eigen::MatrixXcd vr(m, m);
        const lapack_int info =
            LAPACKE_zggev(LAPACK_COL_MAJOR, 'N', 'V', m, a.data(), m, b.data(), m, alpha.data(),
                          beta.data(), nullptr, 1, vr.data(), m);
        if (info != 0)
            throw NumericError("growth_spectrum: zggev failed, info = " + std::to_string(info) +
                               " (pencil scale " + std::to_string(real_scale) + ")");
        for (int i = 0; i < m; ++i) admit(alpha(i), beta(i), vr.col(i));
    }

    std::sort(out.pairs.begin(), out.pairs.end(),
              [](const Eigenpair& l, const Eigenpair& r) { return l.sigma.real() > r.sigma.real(); });
    return out;
}

/// Leading growth rates by family: all, stationary-only, oscillatory-only.
struct FamilyLead {
    double all = kNegInf, stat = kNegInf, osc = kNegInf;
    std::optional<Eigenpair> lead_all, lead_stat, lead_osc;
};

FamilyLead family_leads(const StabilityOperator& op, double rayleigh, const SpectrumOptions& opts) {
    FamilyLead fl;
    auto spec = solve_spectrum(op, rayleigh, opts);
    for (auto& ep : spec.pairs) {
        const double re = ep.sigma.real();
        const bool osc = std::fabs(ep.sigma.imag()) >= opts.tol_freq;
        if (re > fl.all) {
            fl.all = re;
            fl.lead_all = ep;
        }
        if (osc && re > fl.osc) {
            fl.osc = re;
            fl.lead_osc = ep;
        }
        if (!osc && re > fl.stat) {
            fl.stat = re;
            fl.lead_stat = ep;
        }
    }
    if (spec.pairs.empty()) throw NumericError("growth_spectrum: empty filtered spectrum");
    return fl;
}

NeutralPoint point_from_pair(double k, double rayleigh, const Eigenpair& pair, double tol_freq) {
    NeutralPoint pt;
    pt.k = k;
    pt.rayleigh = rayleigh;
    pt.sigma_im = std::fabs(pair.sigma.imag());
    pt.branch = pt.sigma_im < tol_freq ? BranchType::stationary : BranchType::oscillatory;
    pt.mode = classify_mode(pair.w);
    return pt;
}

/// Safeguarded secant iteration on f inside a sign-changing bracket.
template <class F>
double refine_root(F&& f, double r_lo, double f_lo, double r_hi, double f_hi, double tol_f,
                   double* f_at_root) {
    double r0 = r_lo, f0 = f_lo, r1 = r_hi, f1 = f_hi;
    double lo = r_lo, hi = r_hi, flo = f_lo;
    for (int it = 0; it < 80; ++it) {
        double r2;
        const double denom = f1 - f0;
        if (denom != 0.0) {
            r2 = r1 - f1 * (r1 - r0) / denom;
            if (!(r2 > lo && r2 < hi)) r2 = 0.5 * (lo + hi);
        } else {
            r2 = 0.5 * (lo + hi);
        }
        const double f2 = f(r2);
        if (std::fabs(f2) < tol_f || hi - lo < 1e-12 * std::max(1.0, hi)) {
            if (f_at_root) *f_at_root = f2;
            return r2;
        }
        if ((f2 > 0.0) == (flo > 0.0)) {
            lo = r2;
            flo = f2;
        } else {
            hi = r2;
        }
        r0 = r1;
        f0 = f1;
        r1 = r2;
        f1 = f2;
    }
    if (f_at_root) *f_at_root = f1;
    return r1;
}

}  // namespace

std::string to_string(BranchType b) {
    return b == BranchType::stationary ? "stationary" : "oscillatory";
}

StabilityOperator assemble_operator(const BasicState& state, double k, const ProblemParams& p,
                                    const MomentOperator& mop) {
    if (!state.coefficients_ready)
        throw ConsistencyError("assemble_operator: call derive_coefficients first");
    if (mop.state_hash != state.state_hash)
        throw ConsistencyError("assemble_operator: moment operator built for a different state");
    if (std::fabs(mop.m1 * mop.m1 + mop.m2 * mop.m2 - k * k) > 1e-10 * std::max(1.0, k * k))
        throw ConsistencyError("assemble_operator: wavenumber k inconsistent with (m1, m2)");
    if (!(k > 0.0)) throw ValidationError("assemble_operator: k must be > 0");
    const int nn = state.grid.degree + 1;
    if (nn < 8) throw ValidationError("assemble_operator: grid too coarse");

    const Eigen::MatrixXd& d1 = state.grid.d1;
    const Eigen::MatrixXd& d2 = state.grid.d2;
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(nn, nn);
    const Eigen::MatrixXd l2 = d2 - k * k * eye;

    // Companion form over x = (W, F, Theta) with F = (D^2 - k^2) W. The
    // fourth-order operator collocated directly carries an N^8 pencil norm,
    // which buries near-neutral eigenvalues in QZ roundoff; the split keeps
    // every block at second order and the spectrum is unchanged.
    StabilityOperator op;
    op.nn = nn;
    op.k = k;
    op.schmidt = p.schmidt;
    op.state_hash = state.state_hash;
    const int m = 3 * nn;
    op.a0 = Eigen::MatrixXcd::Zero(m, m);
    op.a_r = Eigen::MatrixXcd::Zero(m, m);
    op.b = Eigen::MatrixXcd::Zero(m, m);
    const int fw = 0, ff = nn, ft = 2 * nn;  // block offsets

    // Definition rows: (D^2 - k^2) W - F = 0.
    op.a0.block(fw, fw, nn, nn) = l2.cast<cplx>();
    op.a0.block(fw, ff, nn, nn) = -Eigen::MatrixXcd::Identity(nn, nn);

    // Momentum rows: (sigma/S_c) F = (D^2 - k^2) F + R k^2 Theta.
    op.a0.block(ff, ff, nn, nn) = l2.cast<cplx>();
    op.a_r.block(ff, ft, nn, nn) = (k * k) * Eigen::MatrixXcd::Identity(nn, nn);
    op.b.block(ff, ff, nn, nn) = (eye / p.schmidt).cast<cplx>();

    // Concentration rows: -sigma Theta = (Dn_s) W + [k^2 + Y1 + Y2 D - D^2 + Y0] Theta.
    const Eigen::VectorXd n_s = to_vec(state.n_s);
    const Eigen::VectorXd dn_s = to_vec(state.dn_s_dz);
    const Eigen::VectorXd ups1 = to_vec(state.upsilon1);
    const Eigen::VectorXd ups2 = to_vec(state.upsilon2);
    const Eigen::VectorXd m_s = to_vec(state.m_s);
    const Eigen::VectorXd dm = to_vec(state.dm_dg);
    const Eigen::VectorXd q_s = to_vec(state.q_s_of_z);
    const double vc = p.swim_speed;

    // Taxis-radiation coupling Y0: derivative applied to the whole product
    // profile, plus the horizontal flux term.
    Eigen::MatrixXcd y0 =
        vc * (d1.cast<cplx>() * (n_s.cwiseProduct(dm)).asDiagonal() * mop.g_of_theta);
    Eigen::VectorXd flux_coef(nn);
    for (int i = 0; i < nn; ++i)
        flux_coef(i) = q_s(i) > 0.0 ? vc * n_s(i) * m_s(i) / q_s(i) : 0.0;
    y0 -= cplx(0.0, 1.0) *
          (flux_coef.asDiagonal() * (mop.m1 * mop.p_of_theta + mop.m2 * mop.q_of_theta));

    op.a0.block(ft, fw, nn, nn) = dn_s.asDiagonal().toDenseMatrix().cast<cplx>();
    op.a0.block(ft, ft, nn, nn) =
        (k * k * eye + Eigen::MatrixXd(ups1.asDiagonal()) + ups2.asDiagonal() * d1 - d2)
            .cast<cplx>() +
        y0;
    op.b.block(ft, ft, nn, nn) = -Eigen::MatrixXcd::Identity(nn, nn);

    // Boundary bordering. Bottom (z = 0, node 0) is always rigid.
    auto clear_row = [&](int row) {
        op.a0.row(row).setZero();
        op.a_r.row(row).setZero();
        op.b.row(row).setZero();
    };
    const int top = nn - 1;
    // W = 0 at both walls (definition rows at the wall nodes).
    clear_row(fw);
    op.a0(fw, fw) = 1.0;
    clear_row(fw + top);
    op.a0(fw + top, fw + top) = 1.0;
    // DW = 0 at the bottom wall (momentum row at node 0).
    clear_row(ff);
    op.a0.row(ff).segment(fw, nn) = d1.row(0).cast<cplx>();
    // Top wall: DW = 0 (rigid) or D^2 W = 0 (stress-free; with W(1) = 0 this
    // is exactly F(1) = 0).
    clear_row(ff + top);
    if (p.top_boundary == TopBoundary::rigid)
        op.a0.row(ff + top).segment(fw, nn) = d1.row(top).cast<cplx>();
    else
        op.a0(ff + top, ff + top) = 1.0;
    // Cell-flux rows at both walls:
    // D Theta - Y2 Theta - V_c n_s (dM/dG) G1[Theta] = 0.
    for (const int node : {0, top}) {
        const int row = ft + node;
        clear_row(row);
        Eigen::RowVectorXcd r = d1.row(node).cast<cplx>();
        r(node) -= ups2(node);
        r -= (vc * n_s(node) * dm(node)) * mop.g_of_theta.row(node);
        op.a0.row(row).segment(ft, nn) = r;
    }
    return op;
}

std::vector<std::complex<double>> growth_spectrum(const StabilityOperator& op, double rayleigh,
                                                  const SpectrumOptions& opts) {
    auto spec = solve_spectrum(op, rayleigh, opts);
    std::vector<cplx> out;
    out.reserve(spec.pairs.size());
    for (const auto& ep : spec.pairs) out.push_back(ep.sigma);
    return out;
}

std::vector<Eigenpair> growth_eigenpairs(const StabilityOperator& op, double rayleigh,
                                         const SpectrumOptions& opts) {
    return solve_spectrum(op, rayleigh, opts).pairs;
}

NeutralResult neutral_point(double k, const ProblemParams& p, const BasicState& state,
                            const MomentOperator& mop, const NeutralOptions& opts) {
    if (!(k > 0.0)) throw ValidationError("neutral_point: k must be > 0");
    const StabilityOperator op = assemble_operator(state, k, p, mop);
    auto f = [&](double r) { return family_leads(op, r, opts.spec).all; };

    double r_lo = 0.0, r_hi = 0.0, f_lo = 0.0, f_hi = 0.0;
    bool have_bracket = false;
    if (opts.scan_from_bottom) {
        // Geometric scan upward; the branch_index-th sign change is refined,
        // so the default returns the lowest neutral R.
        int found = 0;
        double r_prev = opts.r_min, f_prev = f(r_prev);
        for (double r = 2.0 * opts.r_min; r_prev < opts.r_max; r *= 2.0) {
            const double rr = std::min(r, opts.r_max);
            const double fr = f(rr);
            if ((f_prev <= 0.0 && fr > 0.0) || (f_prev > 0.0 && fr <= 0.0)) {
                ++found;
                if (found == opts.branch_index) {
                    r_lo = r_prev;
                    f_lo = f_prev;
                    r_hi = rr;
                    f_hi = fr;
                    have_bracket = true;
                    break;
                }
            }
            r_prev = rr;
            f_prev = fr;
            if (rr >= opts.r_max) break;
        }
    } else {
        // Local bracket around the warm start.
        double r = std::clamp(opts.r_guess, opts.r_min, opts.r_max);
        double fr = f(r);
        if (fr <= 0.0) {
            double r2 = r, f2 = fr;
            while (r2 < opts.r_max) {
                const double r3 = std::min(2.0 * r2, opts.r_max);
                const double f3 = f(r3);
                if (f3 > 0.0) {
                    r_lo = r2; f_lo = f2; r_hi = r3; f_hi = f3;
                    have_bracket = true;
                    break;
                }
                r2 = r3;
                f2 = f3;
            }
        } else {
            double r2 = r, f2 = fr;
            while (r2 > opts.r_min) {
                const double r3 = std::max(0.5 * r2, opts.r_min);
                const double f3 = f(r3);
                if (f3 <= 0.0) {
                    r_lo = r3; f_lo = f3; r_hi = r2; f_hi = f2;
                    have_bracket = true;
                    break;
                }
                r2 = r3;
                f2 = f3;
            }
        }
    }
    if (!have_bracket)
        throw BracketingError("neutral_point: no sign change of max Re sigma in [" +
                              std::to_string(opts.r_min) + ", " + std::to_string(opts.r_max) +
                              "] at k = " + std::to_string(k));

    const double r_star = refine_root(f, r_lo, f_lo, r_hi, f_hi, opts.tol_f, nullptr);
    const FamilyLead fl = family_leads(op, r_star, opts.spec);
    if (!fl.lead_all) throw NumericError("neutral_point: empty spectrum at the root");
    NeutralResult res;
    res.pair = *fl.lead_all;
    res.point = point_from_pair(k, r_star, res.pair, opts.spec.tol_freq);
    return res;
}

std::vector<NeutralPoint> trace_neutral_curve(const ProblemParams& p, const BasicState& state,
                                              const DirectionSet& dirs, double k_min, double k_max,
                                              double k_step, const TraceOptions& opts) {
    if (!(k_min > 0.0 && k_max > k_min && k_step > 0.0))
        throw ValidationError("trace_neutral_curve: require 0 < k_min < k_max and k_step > 0");

    std::vector<NeutralPoint> out;
    double warm_stat = -1.0, warm_osc = -1.0;
    for (double k = k_min; k <= k_max + 0.5 * k_step; k += k_step) {
        const double kk = std::min(k, k_max);
        try {
            const MomentOperator mop = moment_operator(state, kk, 0.0, dirs);
            const StabilityOperator op = assemble_operator(state, kk, p, mop);
            const SpectrumOptions& sp = opts.neutral.spec;

            auto f_stat = [&](double r) { return family_leads(op, r, sp).stat; };
            auto f_osc = [&](double r) { return family_leads(op, r, sp).osc; };

            // Stationary branch: bracket around the warm start by doubling or
            // halving, carrying the already-computed endpoint values.
            const NeutralOptions& nopts = opts.neutral;
            double r_stat = -1.0;
            {
                double lo = 0.0, hi = 0.0, flo = 0.0, fhi = 0.0;
                bool ok = false;
                double r_cur = std::clamp(warm_stat > 0.0 ? warm_stat : nopts.r_guess,
                                          nopts.r_min, nopts.r_max);
                double f_cur = f_stat(r_cur);
                if (f_cur <= 0.0) {
                    while (r_cur < nopts.r_max && !ok) {
                        const double r2 = std::min(2.0 * r_cur, nopts.r_max);
                        const double f2 = f_stat(r2);
                        if (f2 > 0.0) {
                            lo = r_cur; flo = f_cur; hi = r2; fhi = f2; ok = true;
                        }
                        r_cur = r2;
                        f_cur = f2;
                    }
                } else {
                    while (r_cur > nopts.r_min && !ok) {
                        const double r2 = std::max(0.5 * r_cur, nopts.r_min);
                        const double f2 = f_stat(r2);
                        if (f2 <= 0.0) {
                            lo = r2; flo = f2; hi = r_cur; fhi = f_cur; ok = true;
                        }
                        r_cur = r2;
                        f_cur = f2;
                    }
                }
                if (ok) {
                    r_stat = refine_root(f_stat, lo, flo, hi, fhi, nopts.tol_f, nullptr);
                    const FamilyLead fl = family_leads(op, r_stat, sp);
                    if (fl.lead_stat) {
                        out.push_back(point_from_pair(kk, r_stat, *fl.lead_stat, sp.tol_freq));
                        out.back().branch = BranchType::stationary;
                        warm_stat = r_stat;
                    }
                }
            }

            // Oscillatory branch, if present. Near onset it undercuts the
            // stationary branch; past the branch point it crosses above it,
            // so the scan reaches well beyond the stationary root.
            if (r_stat > 0.0) {
                const double hi0 = std::min(4.0 * r_stat, opts.neutral.r_max);
                double prev_r = std::max(opts.neutral.r_min, r_stat / opts.osc_search_span);
                if (warm_osc > 0.0)
                    prev_r = std::max(opts.neutral.r_min,
                                      std::min(prev_r, warm_osc / 4.0));
                double prev_f = f_osc(prev_r);
                bool found = false;
                double lo = 0.0, hi = 0.0, flo = 0.0, fhi = 0.0;
                const int n_scan = 18;
                const double ratio = std::pow(hi0 / prev_r, 1.0 / n_scan);
                for (int i = 1; i <= n_scan; ++i) {
                    const double r2 = prev_r * ratio;
                    const double f2 = f_osc(r2);
                    if (std::isfinite(prev_f) && std::isfinite(f2) && prev_f <= 0.0 && f2 > 0.0) {
                        lo = prev_r; flo = prev_f; hi = r2; fhi = f2;
                        found = true;
                        break;
                    }
                    prev_r = r2;
                    prev_f = f2;
                }
                if (found) {
                    const double r_osc = refine_root(f_osc, lo, flo, hi, fhi,
                                                     opts.neutral.tol_f, nullptr);
                    const FamilyLead fl = family_leads(op, r_osc, sp);
                    if (fl.lead_osc && std::fabs(fl.osc) < 1e-4) {
                        out.push_back(point_from_pair(kk, r_osc, *fl.lead_osc, sp.tol_freq));
                        out.back().branch = BranchType::oscillatory;
                        warm_osc = r_osc;
                    }
                } else {
                    warm_osc = -1.0;
                }
            }
        } catch (const std::exception& e) {
            log_info(std::string("trace_neutral_curve: skipping k = ") + std::to_string(kk) +
                     ": " + e.what());
        }
        if (kk >= k_max) break;
    }
    std::sort(out.begin(), out.end(), [](const NeutralPoint& a, const NeutralPoint& b) {
        if (a.k != b.k) return a.k < b.k;
        return static_cast<int>(a.branch) < static_cast<int>(b.branch);
    });
    return out;
}

CriticalPoint critical_point(std::span<const NeutralPoint> curve, const NeutralEvaluator& evaluate,
                             const CriticalOptions& opts) {
    if (curve.empty()) throw ValidationError("critical_point: empty neutral curve");
    std::size_t imin = 0;
    for (std::size_t i = 1; i < curve.size(); ++i)
        if (curve[i].rayleigh < curve[imin].rayleigh) imin = i;

    // Distinct k neighbors around the discrete minimum (branches share k values).
    const double k_min_curve = std::min_element(curve.begin(), curve.end(),
                                                [](auto& a, auto& b) { return a.k < b.k; })->k;
    const double k_max_curve = std::max_element(curve.begin(), curve.end(),
                                                [](auto& a, auto& b) { return a.k < b.k; })->k;
    const NeutralPoint& disc = curve[imin];

    CriticalPoint cp;
    cp.k_c = disc.k;
    cp.rayleigh_c = disc.rayleigh;
    cp.sigma_im = disc.sigma_im;
    cp.branch = disc.branch;
    cp.mode = disc.mode;
    cp.at_range_edge = (disc.k <= k_min_curve + 1e-12) || (disc.k >= k_max_curve - 1e-12);

    // Bracket in k from the nearest distinct-k samples either side.
    double k_left = disc.k, k_right = disc.k;
    for (const auto& pt : curve) {
        if (pt.k < disc.k && (k_left == disc.k || pt.k > k_left)) k_left = pt.k;
        if (pt.k > disc.k && (k_right == disc.k || pt.k < k_right)) k_right = pt.k;
    }

    if (!cp.at_range_edge && evaluate) {
        // Golden-section refinement, then a parabolic polish through the last
        // three samples.
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double a = k_left, b = k_right;
        double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
        NeutralPoint p1 = evaluate(x1), p2 = evaluate(x2);
        NeutralPoint best = p1.rayleigh < p2.rayleigh ? p1 : p2;
        std::vector<NeutralPoint> samples = {disc, p1, p2};
        for (int it = 0; it < 60 && (b - a) > opts.k_tol; ++it) {
            if (p1.rayleigh < p2.rayleigh) {
                b = x2;
                x2 = x1;
                p2 = p1;
                x1 = b - gr * (b - a);
                p1 = evaluate(x1);
                samples.push_back(p1);
            } else {
                a = x1;
                x1 = x2;
                p1 = p2;
                x2 = a + gr * (b - a);
                p2 = evaluate(x2);
                samples.push_back(p2);
            }
            best = p1.rayleigh < p2.rayleigh ? p1 : p2;
        }
        // Parabola through the first three samples: they span the original
        // bracket, so the fit is well conditioned (late golden-section points
        // cluster too tightly for a stable fit).
        const double min_sep = 1e-3 * std::max(1.0, std::fabs(best.k));
        std::vector<NeutralPoint> tri;
        for (const auto& s : samples) {
            bool dup = false;
            for (const auto& t : tri) dup = dup || std::fabs(t.k - s.k) < min_sep;
            if (!dup) tri.push_back(s);
            if (tri.size() == 3) break;
        }
        if (tri.size() == 3) {
            const double x0 = tri[0].k, y0 = tri[0].rayleigh;
            const double xa = tri[1].k, ya = tri[1].rayleigh;
            const double xb = tri[2].k, yb = tri[2].rayleigh;
            const double d1 = (ya - y0) / (xa - x0);
            const double d2 = ((yb - y0) / (xb - x0) - d1) / (xb - xa);
            if (d2 > 0.0) {
                const double kv = 0.5 * (x0 + xa - d1 / d2);
                if (kv > k_left - opts.k_tol && kv < k_right + opts.k_tol) {
                    const NeutralPoint pv = evaluate(kv);
                    if (pv.rayleigh <= best.rayleigh + 1e-12 * std::fabs(best.rayleigh)) best = pv;
                }
            }
        }
        cp.k_c = best.k;
        cp.rayleigh_c = best.rayleigh;
        cp.sigma_im = best.sigma_im;
        cp.branch = best.branch;
        cp.mode = best.mode;
    } else if (!cp.at_range_edge) {
        // No evaluator: parabola vertex through the three discrete points.
        const NeutralPoint* left = nullptr;
        const NeutralPoint* right = nullptr;
        for (const auto& pt : curve) {
            if (std::fabs(pt.k - k_left) < 1e-12 && pt.branch == disc.branch) left = &pt;
            if (std::fabs(pt.k - k_right) < 1e-12 && pt.branch == disc.branch) right = &pt;
        }
        if (left && right) {
            const double x0 = left->k, y0 = left->rayleigh;
            const double xa = disc.k, ya = disc.rayleigh;
            const double xb = right->k, yb = right->rayleigh;
            const double s1 = (ya - y0) / (xa - x0);
            const double s2 = ((yb - y0) / (xb - x0) - s1) / (xb - xa);
            if (s2 > 0.0) {
                cp.k_c = 0.5 * (x0 + xa - s1 / s2);
                cp.rayleigh_c = y0 + s1 * (cp.k_c - x0) + s2 * (cp.k_c - x0) * (cp.k_c - xa);
            }
        }
    }
    cp.lambda_c = 2.0 * M_PI / cp.k_c;
    return cp;
}

int classify_mode(const Eigen::VectorXcd& w) {
    const int nn = static_cast<int>(w.size());
    if (nn < 3) throw ValidationError("classify_mode: profile too short");
    int imax = 0;
    const double wmax = w.cwiseAbs().maxCoeff(&imax);
    if (!(wmax > 1e-12)) throw NumericError("classify_mode: near-zero eigenvector");
    const cplx phase = std::conj(w(imax)) / std::abs(w(imax));
    int count = 0;
    double prev = 0.0;
    for (int i = 1; i < nn - 1; ++i) {
        const double v = (w(i) * phase).real();
        if (std::fabs(v) < 1e-9 * wmax) continue;  // skip near-zero samples
        if (prev != 0.0 && (v > 0.0) != (prev > 0.0)) ++count;
        prev = v;
    }
    return 1 + count;
}

double oscillation_period(const NeutralPoint& pt) {
    if (pt.branch == BranchType::stationary || pt.sigma_im == 0.0)
        throw DomainError("oscillation_period: stationary point has no finite period");
    return 2.0 * M_PI / std::fabs(pt.sigma_im);
}

Evolution reconstruct_evolution(const NeutralPoint& pt, const Eigenpair& pair,
                                const ChebyshevGrid& grid, std::span<const double> times,
                                int x_samples) {
    if (x_samples < 2) throw ValidationError("reconstruct_evolution: x_samples must be >= 2");
    const int nn = static_cast<int>(grid.z.size());
    if (pair.w.size() != nn)
        throw ConsistencyError("reconstruct_evolution: eigenpair does not match the grid");

    const cplx sigma(0.0, pt.branch == BranchType::oscillatory ? pt.sigma_im : 0.0);
    const double wavelength = 2.0 * M_PI / pt.k;
    std::vector<double> xs(x_samples);
    for (int i = 0; i < x_samples; ++i)
        xs[i] = wavelength * static_cast<double>(i) / (x_samples - 1);

    int iz_max = 0;
    pair.w.cwiseAbs().maxCoeff(&iz_max);

    Evolution ev;
    ev.frames.reserve(times.size());
    ev.orbit.reserve(times.size());
    for (const double t : times) {
        EvolutionFrame fr;
        fr.t = t;
        fr.x = xs;
        fr.z = grid.z;
        fr.w1.resize(x_samples, nn);
        fr.n1.resize(x_samples, nn);
        const cplx et = std::exp(sigma * t);
        for (int ix = 0; ix < x_samples; ++ix) {
            const cplx ph = et * std::exp(cplx(0.0, pt.k * xs[ix]));
            for (int iz = 0; iz < nn; ++iz) {
                fr.w1(ix, iz) = (pair.w(iz) * ph).real();
                fr.n1(ix, iz) = (pair.theta(iz) * ph).real();
            }
        }
        ev.frames.push_back(std::move(fr));
        const cplx amp = pair.w(iz_max) * et;  // x = 0
        ev.orbit.push_back({t, amp.real(), (sigma * amp).real()});
    }
    return ev;
}

}  // namespace biostab
