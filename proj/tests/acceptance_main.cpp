// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Table comparisons print the computed values next to the published
// ones; with the shipped default response curve the table gates are the
// qualitative ones (branch type, mode count, trends), the quantitative 3%
// gates arm only when a published-form taxis is wired in.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "biostab/cases.hpp"
#include "biostab/errors.hpp"
#include "biostab/expint.hpp"
#include "oracles.hpp"

using namespace biostab;
using cplx = std::complex<double>;

namespace {

// Set to true only when the exact taxis function behind the published tables
// is wired in; the shipped default then downgrades tables to qualitative
// gates as specified.
constexpr bool kQuantitativeTables = false;

struct Check {
    std::string label;
    bool ok;
};

struct CriterionResult {
    bool ok = true;
    std::vector<Check> checks;
    std::ostringstream log;
    void expect(bool cond, const std::string& label) {
        checks.push_back({label, cond});
        ok = ok && cond;
    }
};

double now_seconds() {
    using namespace std::chrono;
    return duration<double>(steady_clock::now().time_since_epoch()).count();
}

CaseConfig table_config(double tau_h, double b, double a, TopBoundary top) {
    CaseConfig cfg;
    cfg.params.schmidt = 20.0;
    cfg.params.swim_speed = 20.0;
    cfg.params.extinction = tau_h;
    cfg.params.albedo = 0.7;
    cfg.params.diffuse_flux = b;
    cfg.params.aniso_coeff = a;
    cfg.params.critical_intensity = 1.0;
    cfg.params.top_boundary = top;
    cfg.numerics.k_min = 0.5;
    cfg.numerics.k_max = 8.0;
    cfg.numerics.k_step = 0.3;
    return cfg;
}

struct PaperRow {
    double tau_h, b, a;
    double lambda_c, r_c, im_sigma;
    int mode;
    bool oscillatory;
    bool excluded = false;  // anomalous published value, excluded from gates
};

const std::vector<PaperRow> kTable1 = {
    {0.5, 0.50, 0.0, 2.93, 239.63, 0.00, 1, false},
    {0.5, 0.50, 0.4, 2.93, 244.27, 0.00, 1, false},
    {0.5, 0.50, 0.8, 2.93, 234.45, 0.00, 1, false},
    {0.5, 0.62, 0.0, 2.52, 211.67, 0.00, 1, false},
    {0.5, 0.62, 0.4, 2.57, 212.46, 0.00, 1, false},
    {0.5, 0.62, 0.8, 2.63, 218.36, 0.00, 1, false},
    {0.5, 0.63, 0.0, 2.57, 272.01, 0.00, 1, false},
    {0.5, 0.63, 0.4, 2.35, 365.36, 0.00, 1, false},
    {0.5, 0.63, 0.8, 1.86, 653.50, 0.00, 2, false},
    {1.0, 0.60, 0.0, 2.23, 448.41, 0.00, 1, false},
    {1.0, 0.60, 0.4, 2.18, 446.66, 0.00, 1, false},
    {1.0, 0.60, 0.8, 2.18, 442.61, 0.00, 1, false},
    {1.0, 0.75, 0.0, 3.06, 362.80, 15.78, 1, true},
    {1.0, 0.75, 0.4, 3.31, 345.47, 14.05, 1, true},
    {1.0, 0.75, 0.8, 1.85, 342.29, 0.00, 1, false},
    {1.0, 0.76, 0.0, 3.50, 332.09, 13.31, 1, true},
    {1.0, 0.76, 0.4, 1.92, 338.38, 0.00, 1, false},
    {1.0, 0.76, 0.8, 1.80, 605.70, 0.00, 2, false},
};

const std::vector<PaperRow> kTable2 = {
    {0.5, 0.50, 0.0, 1.64, 1111.13, 0.00, 1, false},
    {0.5, 0.50, 0.4, 1.64, 1086.85, 0.00, 1, false},
    {0.5, 0.50, 0.8, 1.66, 1059.66, 0.00, 1, false},
    {0.5, 0.62, 0.0, 1.83, 398.22, 0.00, 1, false},
    {0.5, 0.62, 0.4, 1.89, 378.76, 0.00, 1, false},
    {0.5, 0.62, 0.8, 1.95, 363.20, 0.00, 1, false},
    {0.5, 0.63, 0.0, 2.06, 350.48, 0.00, 1, false},
    {0.5, 0.63, 0.4, 2.14, 389.80, 0.00, 1, false},
    {0.5, 0.63, 0.8, 1.90, 628.99, 0.00, 2, false},
    {1.0, 0.60, 0.0, 1.31, 1727.53, 0.00, 1, false},
    {1.0, 0.60, 0.4, 1.28, 1717.81, 0.00, 1, false},
    {1.0, 0.60, 0.8, 1.26, 1699.18, 0.00, 1, false},
    // Published 69.96 is wildly discordant with its neighbours; excluded.
    {1.0, 0.75, 0.0, 2.36, 69.96, 24.71, 1, true, true},
    {1.0, 0.75, 0.4, 2.45, 621.48, 22.25, 1, true},
    {1.0, 0.75, 0.8, 1.85, 342.29, 0.00, 1, false},
    {1.0, 0.76, 0.0, 2.70, 581.93, 21.43, 1, true},
    {1.0, 0.76, 0.4, 3.13, 519.06, 17.51, 1, true},
    {1.0, 0.76, 0.8, 1.74, 610.25, 0.00, 2, false},
};

struct ComputedRow {
    CriticalPoint cp;
    bool ok = false;
    std::string error;
};

/// Runs all rows of one table with a two-worker pool.
std::vector<ComputedRow> run_table(const std::vector<PaperRow>& rows, TopBoundary top) {
    std::vector<ComputedRow> out(rows.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= rows.size()) return;
            try {
                const CaseConfig cfg = table_config(rows[i].tau_h, rows[i].b, rows[i].a, top);
                const CasePipeline cp = build_case(cfg);
                out[i].cp = find_critical(cp, cfg.numerics.k_min, cfg.numerics.k_max,
                                          cfg.numerics.k_step);
                out[i].ok = true;
            } catch (const std::exception& e) {
                out[i].error = e.what();
            }
        }
    };
    const int n_workers = std::max(2u, std::thread::hardware_concurrency());
    std::vector<std::thread> pool;
    for (int t = 0; t < n_workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return out;
}

void print_table(CriterionResult& cr, const std::vector<PaperRow>& rows,
                 const std::vector<ComputedRow>& got) {
    cr.log << "      tau_h    B    A |  lambda(paper/ours)      R_c(paper/ours)   Im(paper/ours)"
              "  mode  branch\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        char buf[200];
        if (got[i].ok) {
            std::snprintf(buf, sizeof(buf),
                          "      %4.1f %5.2f %4.1f | %6.2f /%6.2f    %8.2f /%9.2f   %6.2f /%6.2f"
                          "   %d/%d   %s%s%s",
                          rows[i].tau_h, rows[i].b, rows[i].a, rows[i].lambda_c,
                          got[i].cp.lambda_c, rows[i].r_c, got[i].cp.rayleigh_c,
                          rows[i].im_sigma, got[i].cp.sigma_im, rows[i].mode, got[i].cp.mode,
                          rows[i].oscillatory ? "osc" : "stat",
                          got[i].cp.branch == BranchType::oscillatory ? "/osc" : "/stat",
                          rows[i].excluded ? "  [excluded]" : "");
        } else {
            std::snprintf(buf, sizeof(buf), "      %4.1f %5.2f %4.1f | FAILED: %s",
                          rows[i].tau_h, rows[i].b, rows[i].a, got[i].error.c_str());
        }
        cr.log << buf << "\n";
    }
}

int find_row(const std::vector<PaperRow>& rows, double tau_h, double b, double a) {
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (rows[i].tau_h == tau_h && rows[i].b == b && rows[i].a == a)
            return static_cast<int>(i);
    return -1;
}

void table_gates(CriterionResult& cr, const std::vector<PaperRow>& rows,
                 const std::vector<ComputedRow>& got, const char* tag,
                 const std::vector<std::pair<std::array<double, 2>, int>>& trends) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].excluded) continue;
        std::ostringstream id;
        id << tag << " (tau_h=" << rows[i].tau_h << ", B=" << rows[i].b << ", A=" << rows[i].a
           << ")";
        if (!got[i].ok) {
            cr.expect(false, id.str() + " solved");
            continue;
        }
        const CriticalPoint& c = got[i].cp;
        if (kQuantitativeTables) {
            cr.expect(std::fabs(c.rayleigh_c - rows[i].r_c) <= 0.03 * rows[i].r_c,
                      id.str() + " R_c within 3%");
            cr.expect(std::fabs(c.lambda_c - rows[i].lambda_c) <= 0.03 * rows[i].lambda_c,
                      id.str() + " lambda_c within 3%");
            if (rows[i].oscillatory)
                cr.expect(std::fabs(c.sigma_im - rows[i].im_sigma) <= 0.05 * rows[i].im_sigma,
                          id.str() + " Im sigma within 5%");
            cr.expect(c.mode == rows[i].mode, id.str() + " mode");
        } else {
            cr.expect((c.branch == BranchType::oscillatory) == rows[i].oscillatory,
                      id.str() + " branch type");
            cr.expect(c.mode == rows[i].mode, id.str() + " mode");
        }
    }
    // Monotone trends of R_c with the scattering coefficient, asserted only
    // for the families where the text and the printed table agree.
    for (const auto& [fam, dir] : trends) {
        const int i0 = find_row(rows, fam[0], fam[1], 0.0);
        const int i8 = find_row(rows, fam[0], fam[1], 0.8);
        if (i0 < 0 || i8 < 0 || !got[i0].ok || !got[i8].ok) {
            cr.expect(false, std::string(tag) + " trend rows solved");
            continue;
        }
        std::ostringstream id;
        id << tag << " (tau_h=" << fam[0] << ", B=" << fam[1] << ") R_c "
           << (dir > 0 ? "increases" : "decreases") << " from A=0 to A=0.8";
        if (dir > 0)
            cr.expect(got[i8].cp.rayleigh_c > got[i0].cp.rayleigh_c, id.str());
        else
            cr.expect(got[i8].cp.rayleigh_c < got[i0].cp.rayleigh_c, id.str());
    }
}

// ---------------------------------------------------------------------------

CriterionResult criterion_1() {
    CriterionResult cr;
    ProblemParams p;
    p.albedo = 0.0;
    p.diffuse_flux = 0.5;
    p.extinction = 1.0;
    const RadiativeField f = solve_fredholm(p, 201, 1e-9);
    double dg = 0.0, dq = 0.0;
    for (std::size_t i = 0; i < f.tau_grid.size(); ++i) {
        dg = std::max(dg, std::fabs(f.g_s[i] - 2.0 * p.diffuse_flux * expint(2, f.tau_grid[i])));
        dq = std::max(dq, std::fabs(f.q_s[i] - 2.0 * p.diffuse_flux * expint(3, f.tau_grid[i])));
    }
    cr.log << "      max |G_s - 2B E2| = " << dg << ", max |q_s - 2B E3| = " << dq << "\n";
    cr.expect(dg < 1e-8, "G_s matches the pure-absorption limit to 1e-8");
    cr.expect(dq < 1e-8, "q_s matches the pure-absorption limit to 1e-8");
    return cr;
}

CriterionResult criterion_2() {
    CriterionResult cr;
    struct Case {
        double a, tau_h;
    };
    std::vector<Case> cases;
    for (double a : {0.0, 0.4, 0.8})
        for (double tau_h : {0.5, 1.0}) cases.push_back({a, tau_h});
    std::vector<double> diffs(cases.size(), 0.0);
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cases.size()) return;
            ProblemParams p;
            p.albedo = 0.7;
            p.aniso_coeff = cases[i].a;
            p.extinction = cases[i].tau_h;
            p.diffuse_flux = 1.0;
            const RadiativeField f = solve_fredholm(p, 201, 1e-9);
            const auto oracle = oracles::dense_nystrom_field(p, 2001);
            double d = 0.0;
            for (int j = 0; j < 201; ++j) {
                const int oj = j * 10;
                d = std::max(d, std::fabs(f.g_s[j] - oracle.g[oj]) / std::fabs(oracle.g[oj]));
                d = std::max(d, std::fabs(f.q_s[j] - oracle.q[oj]) / std::fabs(oracle.q[oj]));
            }
            diffs[i] = d;
        }
    };
    std::thread t1(worker), t2(worker);
    t1.join();
    t2.join();
    double worst = 0.0;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        cr.log << "      A=" << cases[i].a << " tau_h=" << cases[i].tau_h
               << ": max rel diff = " << diffs[i] << "\n";
        worst = std::max(worst, diffs[i]);
    }
    cr.expect(worst < 1e-4, "production vs dense oracle < 1e-4 on all six cases");
    return cr;
}

CriterionResult criterion_3() {
    CriterionResult cr;
    const TaxisFunction taxis = default_taxis(1.0);
    struct Row {
        double tau_h, b, a;
    };
    std::vector<Row> rows;
    for (const double tau_h : {0.5, 1.0}) {
        const std::vector<double> b_list = tau_h == 0.5 ? std::vector<double>{0.50, 0.62, 0.63}
                                                        : std::vector<double>{0.60, 0.75, 0.76};
        for (const double b : b_list)
            for (const double a : {0.0, 0.4, 0.8}) rows.push_back({tau_h, b, a});
    }
    std::vector<double> mass_err(rows.size(), 0.0), bal_err(rows.size(), 0.0);
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= rows.size()) return;
            ProblemParams p;
            p.swim_speed = 20.0;
            p.schmidt = 20.0;
            p.extinction = rows[idx].tau_h;
            p.albedo = 0.7;
            p.diffuse_flux = rows[idx].b;
            p.aniso_coeff = rows[idx].a;
            const RadiativeField f = solve_fredholm(p, 201, 1e-9);
            const BasicState s = solve_basic_state(p, f, taxis, 64, 1e-9);
            // Independent quadrature of the mean concentration.
            const auto w = clenshaw_curtis_weights(s.grid.degree);
            double mass = 0.0;
            for (std::size_t j = 0; j < w.size(); ++j) mass += w[j] * s.n_s[j];
            mass_err[idx] = std::fabs(mass - 1.0);
            // Governing balance in its integrated (exact-solution) form:
            // ln n(z) - ln n(1) + V_c * integral_z^1 M(G_s) dz' = 0. The
            // integral uses composite Simpson on a fine trajectory, which
            // stays well conditioned where the interpolated field is only
            // piecewise smooth.
            const int nf = 8001;  // odd
            std::vector<double> zf(nf);
            for (int i = 0; i < nf; ++i) zf[i] = 1.0 - static_cast<double>(i) / (nf - 1);
            const auto st = integrate_concentration(p, f, taxis, s.top_value, zf);
            std::vector<double> m_vals(nf);
            for (int i = 0; i < nf; ++i)
                m_vals[i] = taxis.value(
                    f.g_spline.value(std::clamp(st[i][1], 0.0, p.extinction)));
            const double h = 1.0 / (nf - 1);
            double integral = 0.0;
            double worst = 0.0;
            for (int i = 2; i < nf; i += 2) {
                integral += h / 3.0 * (m_vals[i - 2] + 4.0 * m_vals[i - 1] + m_vals[i]);
                const double res =
                    std::log(st[i][0] / s.top_value) + p.swim_speed * integral;
                worst = std::max(worst, std::fabs(res));
            }
            bal_err[idx] = worst;
        }
    };
    std::thread t1(worker), t2(worker);
    t1.join();
    t2.join();
    const double worst_mass = *std::max_element(mass_err.begin(), mass_err.end());
    const double worst_res = *std::max_element(bal_err.begin(), bal_err.end());
    cr.log << "      worst |mean - 1| = " << worst_mass
           << ", worst integrated-balance residual = " << worst_res << "\n";
    cr.expect(worst_mass < 1e-7, "mean concentration = 1 within 1e-7 on all rows");
    cr.expect(worst_res < 1e-7, "governing balance residual < 1e-7 on all rows");
    return cr;
}

CriterionResult criterion_4(std::vector<ComputedRow>& table1_out) {
    CriterionResult cr;
    table1_out = run_table(kTable1, TopBoundary::stress_free);
    print_table(cr, kTable1, table1_out);
    // Trends asserted where the narrative and the printed values agree:
    // (0.5, 0.50) down, (0.5, 0.62) up, (0.5, 0.63) up, (1, 0.60) down,
    // (1, 0.76) up; the (1, 0.75) family is internally inconsistent in the
    // source and carries no trend gate.
    table_gates(cr, kTable1, table1_out, "T1",
                {{{0.5, 0.50}, -1},
                 {{0.5, 0.62}, +1},
                 {{0.5, 0.63}, +1},
                 {{1.0, 0.60}, -1},
                 {{1.0, 0.76}, +1}});
    return cr;
}

CriterionResult criterion_5(const std::vector<ComputedRow>& table1,
                            std::vector<ComputedRow>& table2_out) {
    CriterionResult cr;
    table2_out = run_table(kTable2, TopBoundary::rigid);
    print_table(cr, kTable2, table2_out);
    table_gates(cr, kTable2, table2_out, "T2",
                {{{0.5, 0.50}, -1},
                 {{0.5, 0.63}, +1},
                 {{1.0, 0.60}, -1},
                 {{1.0, 0.76}, +1}});
    // Unconditional ordering: rigid top is stiffer than stress-free.
    int ordered = 0, total = 0;
    for (std::size_t i = 0; i < kTable1.size(); ++i) {
        if (!table1[i].ok || !table2_out[i].ok) continue;
        ++total;
        if (table2_out[i].cp.rayleigh_c > table1[i].cp.rayleigh_c) ++ordered;
    }
    cr.log << "      rigid R_c > stress-free R_c on " << ordered << "/" << total << " rows\n";
    cr.expect(total == 18 && ordered == total,
              "rigid-top R_c exceeds stress-free R_c for every parameter set");
    return cr;
}

// The branch point k_b is where the oscillatory neutral branch crosses the
// stationary one: below it the onset is oscillatory, above it stationary.
double branch_point(const std::vector<NeutralPoint>& curve) {
    double k_b = 0.0;
    for (const auto& pt : curve) {
        if (pt.branch != BranchType::oscillatory) continue;
        for (const auto& st : curve) {
            if (st.branch == BranchType::stationary && std::fabs(st.k - pt.k) < 1e-9 &&
                pt.rayleigh <= st.rayleigh * (1.0 + 1e-9))
                k_b = std::max(k_b, pt.k);
        }
    }
    return k_b;
}

CriterionResult criterion_6() {
    CriterionResult cr;
    // Branch structure of the overstable family.
    const CaseConfig cfg = table_config(1.0, 0.75, 0.0, TopBoundary::stress_free);
    const CasePipeline cp = build_case(cfg);
    const auto curve = trace_case(cp, 0.8, 4.4, 0.1);
    const double k_b = branch_point(curve);
    double r_min = 1e300;
    bool min_is_osc = false;
    for (const auto& pt : curve) {
        if (pt.rayleigh < r_min) {
            r_min = pt.rayleigh;
            min_is_osc = pt.branch == BranchType::oscillatory;
        }
    }
    cr.log << "      A=0: oscillatory onset for k <= k_b = " << k_b
           << " (published 2.75 +- 10%), curve minimum R = " << r_min
           << (min_is_osc ? " on the oscillatory branch" : " on the stationary branch") << "\n";
    cr.expect(k_b > 0.0, "A=0: an oscillatory branch exists");
    cr.expect(std::fabs(k_b - 2.75) <= 0.275, "A=0: k_b = 2.75 within 10%");
    cr.expect(min_is_osc, "A=0: the most unstable solution lies on the oscillatory branch");

    // A = 0.8: the first-instability frequency reaches zero near k = 3.0.
    const CaseConfig cfg8 = table_config(1.0, 0.75, 0.8, TopBoundary::stress_free);
    const CasePipeline cp8 = build_case(cfg8);
    const auto curve8 = trace_case(cp8, 0.8, 4.4, 0.1);
    const double k_zero = branch_point(curve8);
    cr.log << "      A=0.8: onset frequency reaches zero near k = " << k_zero
           << " (published 3.0 +- 10%)\n";
    cr.expect(k_zero > 0.0, "A=0.8: an oscillatory branch exists");
    cr.expect(std::fabs(k_zero - 3.0) <= 0.30, "A=0.8: frequency reaches zero at k = 3.0 within 10%");
    return cr;
}

CriterionResult criterion_7() {
    CriterionResult cr;
    ProblemParams p;
    p.swim_speed = 20.0;
    p.schmidt = 20.0;
    p.extinction = 0.5;
    p.albedo = 0.7;
    p.diffuse_flux = 0.5;
    p.aniso_coeff = 0.4;
    const TaxisFunction taxis = default_taxis(1.0);
    const RadiativeField f = solve_fredholm(p);
    const BasicState s = make_basic_state(p, f, taxis, 64);
    const DirectionSet dirs = make_direction_set(24, 16);
    const int nn = static_cast<int>(s.grid.z.size());

    // Linearity and conjugation of the perturbed moments.
    {
        std::mt19937 rng(7);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        std::vector<cplx> t1(nn), t2(nn), combo(nn), t1c(nn);
        for (int j = 0; j < nn; ++j) {
            t1[j] = cplx(u(rng), u(rng));
            t2[j] = cplx(u(rng), u(rng));
            t1c[j] = std::conj(t1[j]);
        }
        const cplx a(u(rng), u(rng)), b(u(rng), u(rng));
        for (int j = 0; j < nn; ++j) combo[j] = a * t1[j] + b * t2[j];
        const double tol = 1e-12;
        const auto m1 = solve_perturbed_intensity(t1, s, 1.3, 0.7, dirs, tol);
        const auto m2 = solve_perturbed_intensity(t2, s, 1.3, 0.7, dirs, tol);
        const auto mc = solve_perturbed_intensity(combo, s, 1.3, 0.7, dirs, tol);
        const auto mj = solve_perturbed_intensity(t1c, s, -1.3, -0.7, dirs, tol);
        double lin = 0.0, conj_err = 0.0, scale = 1.0;
        for (int j = 0; j < nn; ++j) {
            lin = std::max(lin, std::abs(mc.g1[j] - (a * m1.g1[j] + b * m2.g1[j])));
            lin = std::max(lin, std::abs(mc.s[j] - (a * m1.s[j] + b * m2.s[j])));
            conj_err = std::max(conj_err, std::abs(mj.g1[j] - std::conj(m1.g1[j])));
            conj_err = std::max(conj_err, std::abs(mj.p[j] - std::conj(m1.p[j])));
            scale = std::max({scale, std::abs(mc.g1[j])});
        }
        cr.log << "      moment linearity " << lin / scale << ", conjugation " << conj_err / scale
               << "\n";
        cr.expect(lin / scale < 1e-10, "perturbed-moment linearity to 1e-10");
        cr.expect(conj_err / scale < 1e-10, "perturbed-moment conjugation to 1e-10");
    }

    // Horizontal isotropy of the neutral Rayleigh number.
    {
        const double k = 1.9;
        const double c = 0.6, sn = 0.8;  // rotated wavevector of the same magnitude
        const MomentOperator ax = moment_operator(s, k, 0.0, dirs);
        const MomentOperator rot = moment_operator(s, k * c, k * sn, dirs);
        const NeutralResult ra = neutral_point(k, p, s, ax);
        const NeutralResult rr = neutral_point(k, p, s, rot);
        const double rel = std::fabs(ra.point.rayleigh - rr.point.rayleigh) /
                           std::fabs(ra.point.rayleigh);
        cr.log << "      neutral R axial " << ra.point.rayleigh << " vs rotated "
               << rr.point.rayleigh << " (rel " << rel << ")\n";
        cr.expect(rel < 1e-6, "neutral R horizontally isotropic to 1e-6");

        // Spectrum conjugate closure at the neutral point.
        const StabilityOperator op = assemble_operator(s, k, p, ax);
        const auto spec = growth_spectrum(op, ra.point.rayleigh);
        double worst = 0.0;
        for (const cplx& sig : spec) {
            if (std::fabs(sig.imag()) < 1e-12) continue;
            double best = 1e300;
            for (const cplx& other : spec) best = std::min(best, std::abs(other - std::conj(sig)));
            worst = std::max(worst, best);
        }
        cr.log << "      conjugate-closure defect " << worst << "\n";
        cr.expect(worst < 1e-8, "spectrum closed under conjugation to 1e-8");

        // Boundary-condition residuals of the leading eigenvector.
        const auto pairs = growth_eigenpairs(op, ra.point.rayleigh);
        const Eigenpair& lp = pairs.front();
        const Eigen::MatrixXd& d1 = s.grid.d1;
        const Eigen::MatrixXd& d2 = s.grid.d2;
        const double wn = lp.w.norm(), tn = lp.theta.norm();
        double worst_bc = std::abs(lp.w(0)) / wn;
        worst_bc = std::max(worst_bc, std::abs(lp.w(nn - 1)) / wn);
        worst_bc = std::max(worst_bc, std::abs((d1.row(0).cast<cplx>() * lp.w)(0, 0)) /
                                          (d1.row(0).norm() * wn));
        worst_bc = std::max(worst_bc, std::abs((d2.row(nn - 1).cast<cplx>() * lp.w)(0, 0)) /
                                          (d2.row(nn - 1).norm() * wn));
        for (const int node : {0, nn - 1}) {
            cplx r = (d1.row(node).cast<cplx>() * lp.theta)(0, 0);
            r -= s.upsilon2[node] * lp.theta(node);
            r -= p.swim_speed * s.n_s[node] * s.dm_dg[node] *
                 (ax.g_of_theta.row(node) * lp.theta)(0, 0);
            worst_bc = std::max(worst_bc, std::abs(r) / (d1.row(node).norm() * tn));
        }
        cr.log << "      worst BC residual " << worst_bc << "\n";
        cr.expect(worst_bc < 1e-8, "eigenvector boundary residuals < 1e-8");
    }

    // Grid convergence of the critical Rayleigh number, 64 -> 96.
    {
        const CaseConfig cfg = table_config(0.5, 0.5, 0.0, TopBoundary::stress_free);
        const CasePipeline cp64 = build_case(cfg);
        const CriticalPoint c64 = find_critical(cp64, cfg.numerics.k_min, cfg.numerics.k_max,
                                                cfg.numerics.k_step);
        CaseConfig cfg96 = cfg;
        cfg96.numerics.n_z = 96;
        const CasePipeline cp96 = build_case(cfg96);
        // Localized refinement around the coarse minimizer.
        const double dk = cfg.numerics.k_step;
        std::vector<NeutralPoint> seed;
        double warm = c64.rayleigh_c;
        for (const double k : {c64.k_c - dk, c64.k_c, c64.k_c + dk}) {
            NeutralOptions o;
            o.scan_from_bottom = false;
            o.r_guess = warm;
            const NeutralResult nr = solve_neutral_at(cp96, k, o);
            warm = nr.point.rayleigh;
            seed.push_back(nr.point);
        }
        double warm2 = warm;
        NeutralEvaluator eval = [&cp96, &warm2](double k) {
            NeutralOptions o;
            o.scan_from_bottom = false;
            o.r_guess = warm2;
            const NeutralResult nr = solve_neutral_at(cp96, k, o);
            warm2 = nr.point.rayleigh;
            return nr.point;
        };
        const CriticalPoint c96 = critical_point(seed, eval);
        const double rel = std::fabs(c96.rayleigh_c - c64.rayleigh_c) / c64.rayleigh_c;
        cr.log << "      R_c(64) = " << c64.rayleigh_c << ", R_c(96) = " << c96.rayleigh_c
               << " (rel " << rel << ")\n";
        cr.expect(rel < 0.005, "critical Rayleigh number moves < 0.5% under 64 -> 96");
    }
    return cr;
}

CriterionResult criterion_8() {
    CriterionResult cr;
    for (const double b : {0.5, 0.62, 0.63}) {
        ProblemParams p0;
        p0.albedo = 0.7;
        p0.extinction = 0.5;
        p0.diffuse_flux = b;
        p0.aniso_coeff = 0.0;
        ProblemParams p8 = p0;
        p8.aniso_coeff = 0.8;
        const UniformProfile u0 = uniform_suspension_profile(p0, 201);
        const UniformProfile u8 = uniform_suspension_profile(p8, 201);
        std::ostringstream id;
        id << "B=" << b;
        cr.log << "      " << id.str() << ": G_s(0) " << u0.g_s.front() << " -> "
               << u8.g_s.front() << ", G_s(1) " << u0.g_s.back() << " -> " << u8.g_s.back()
               << "\n";
        cr.expect(u8.g_s.front() > u0.g_s.front(),
                  id.str() + ": raising A increases G_s at z=0");
        cr.expect(u8.g_s.back() < u0.g_s.back(), id.str() + ": raising A decreases G_s at z=1");
    }
    return cr;
}

}  // namespace

int main(int argc, char** argv) {
    // Optional arguments select a subset of criteria by number.
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
    auto wanted = [&](int id) {
        return selected.empty() ||
               std::find(selected.begin(), selected.end(), id) != selected.end();
    };

    std::printf("biostab acceptance suite (taxis: %s)\n",
                default_taxis(1.0).id.c_str());
    std::printf("table gates: %s\n\n",
                kQuantitativeTables ? "quantitative (published-form taxis)"
                                    : "qualitative (shipped default taxis)");
    bool all_ok = true;
    std::vector<ComputedRow> table1, table2;

    struct Entry {
        int id;
        const char* name;
        std::function<CriterionResult()> run;
    };
    const std::vector<Entry> entries = {
        {1, "analytic radiative limit (omega = 0)", criterion_1},
        {2, "steady field vs dense quadrature oracle", criterion_2},
        {3, "basic-state conservation and balance residual", criterion_3},
        {4, "stress-free table regression", [&]() { return criterion_4(table1); }},
        {5, "rigid-top table regression and boundary ordering",
         [&]() { return criterion_5(table1, table2); }},
        {6, "oscillatory branch structure", criterion_6},
        {7, "property suite (taxis independent)", criterion_7},
        {8, "forward scattering reshapes the uniform intensity profile", criterion_8},
    };

    for (const auto& entry : entries) {
        if (!wanted(entry.id)) continue;
        if (entry.id == 5 && table1.empty() && !wanted(4)) {
            std::printf("[criterion 5] skipped: needs the criterion-4 table\n");
            continue;
        }
        const double t0 = now_seconds();
        CriterionResult cr;
        try {
            cr = entry.run();
        } catch (const std::exception& e) {
            cr.ok = false;
            cr.log << "      exception: " << e.what() << "\n";
        }
        const double dt = now_seconds() - t0;
        std::printf("[criterion %d] %-55s %s  (%.1f s)\n", entry.id, entry.name,
                    cr.ok ? "PASS" : "FAIL", dt);
        std::fputs(cr.log.str().c_str(), stdout);
        for (const auto& c : cr.checks)
            if (!c.ok) std::printf("      FAILED CHECK: %s\n", c.label.c_str());
        std::fflush(stdout);
        all_ok = all_ok && cr.ok;
    }
    std::printf("\nacceptance: %s\n", all_ok ? "ALL CRITERIA PASS" : "FAILURES PRESENT");
    return all_ok ? 0 : 1;
}
