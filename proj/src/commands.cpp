#include "biostab/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>
#include <vector>

#include "biostab/cases.hpp"
#include "biostab/csv.hpp"
#include "biostab/errors.hpp"
#include "biostab/log.hpp"
#include "biostab/manifest.hpp"

namespace biostab {

namespace {

namespace fs = std::filesystem;

struct KRange {
    double k_min, k_max, k_step;
};

KRange k_range(const CaseConfig& cfg, const CommandOptions& opt) {
    KRange r{cfg.numerics.k_min, cfg.numerics.k_max, cfg.numerics.k_step};
    if (opt.k_min) r.k_min = *opt.k_min;
    if (opt.k_max) r.k_max = *opt.k_max;
    if (opt.k_step) r.k_step = *opt.k_step;
    if (!(r.k_min > 0.0 && r.k_max > r.k_min && r.k_step > 0.0))
        throw ValidationError("k range: require 0 < k_min < k_max and k_step > 0");
    return r;
}

std::string sanitize(std::string s) {
    std::replace(s.begin(), s.end(), ',', ';');
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
}

template <class Body>
int run_guarded(Body&& body) {
    try {
        return body();
    } catch (const ValidationError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return kExitSolverError;
    }
}

/// One sweep axis: a recognized parameter key and its values (as strings).
struct SweepAxis {
    std::string key;
    std::vector<std::string> values;
};

std::vector<SweepAxis> parse_sweep_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ValidationError("sweep: cannot open \"" + path + "\"");
    const std::vector<std::string> allowed = {"schmidt", "vc",     "tau_h", "omega",
                                              "a_coeff", "b_flux", "g_c",   "top_boundary"};
    std::vector<SweepAxis> axes;
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream is(line);
        std::string key;
        if (!(is >> key)) continue;
        std::string eq;
        if (!(is >> eq) || eq != "=")
            throw ValidationError("sweep: line " + std::to_string(lineno) +
                                  " is not of the form key = v1 v2 ...");
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ValidationError("sweep: unknown key \"" + key + "\" on line " +
                                  std::to_string(lineno));
        SweepAxis axis;
        axis.key = key;
        std::string v;
        while (is >> v) axis.values.push_back(v);
        if (axis.values.empty())
            throw ValidationError("sweep: key \"" + key + "\" has no values");
        axes.push_back(std::move(axis));
    }
    return axes;
}

void apply_sweep_value(ProblemParams& p, const std::string& key, const std::string& value) {
    if (key == "top_boundary") {
        p.top_boundary = top_boundary_from_string(value);
        return;
    }
    double v = 0.0;
    try {
        v = std::stod(value);
    } catch (const std::exception&) {
        throw ValidationError("sweep: non-numeric value \"" + value + "\" for key " + key);
    }
    if (key == "schmidt") p.schmidt = v;
    else if (key == "vc") p.swim_speed = v;
    else if (key == "tau_h") p.extinction = v;
    else if (key == "omega") p.albedo = v;
    else if (key == "a_coeff") p.aniso_coeff = v;
    else if (key == "b_flux") p.diffuse_flux = v;
    else if (key == "g_c") p.critical_intensity = v;
}

struct SweepRow {
    ProblemParams params;
    CriticalPoint cp;
    bool ok = false;
    std::string status;
};

}  // namespace

int cmd_steady(const CommandOptions& opt) {
    return run_guarded([&]() {
        const CaseConfig cfg = load_config(opt.config_path);
        const TaxisFunction taxis = default_taxis(cfg.params.critical_intensity);
        RunManifest manifest = make_manifest(cfg, taxis);
        const std::string hash = manifest.hash();

        const UniformProfile profile = uniform_suspension_profile(cfg.params);
        const RadiativeField field = solve_fredholm(cfg.params, 201, cfg.numerics.tol_fredholm);
        const BasicState state = make_basic_state(cfg.params, field, taxis, cfg.numerics.n_z);

        const fs::path out(opt.out_dir);
        CsvWriter radiative(out / "radiative_profile.csv");
        radiative.comment("manifest: " + hash);
        radiative.header({"tau", "z", "g_s", "q_s"});
        for (std::size_t i = 0; i < profile.z.size(); ++i)
            radiative.row({csv_num(profile.tau[i]), csv_num(profile.z[i]),
                           csv_num(profile.g_s[i]), csv_num(profile.q_s[i])});

        CsvWriter basic(out / "basic_state.csv");
        basic.comment("manifest: " + hash);
        basic.header({"z", "n_s", "tau", "g_s", "m_s", "upsilon1", "upsilon2"});
        for (std::size_t j = 0; j < state.grid.z.size(); ++j)
            basic.row({csv_num(state.grid.z[j]), csv_num(state.n_s[j]),
                       csv_num(state.tau_of_z[j]), csv_num(state.g_s_of_z[j]),
                       csv_num(state.m_s[j]), csv_num(state.upsilon1[j]),
                       csv_num(state.upsilon2[j])});

        radiative.commit();
        basic.commit();
        manifest.outputs = {"radiative_profile.csv", "basic_state.csv"};
        write_manifest(manifest, opt.out_dir);
        return kExitOk;
    });
}

int cmd_neutral(const CommandOptions& opt) {
    return run_guarded([&]() {
        const CaseConfig cfg = load_config(opt.config_path);
        const KRange kr = k_range(cfg, opt);
        const CasePipeline cp = build_case(cfg);
        RunManifest manifest = make_manifest(cfg, cp.taxis);

        const auto curve = trace_case(cp, kr.k_min, kr.k_max, kr.k_step);

        CsvWriter writer(fs::path(opt.out_dir) / "neutral_curve.csv");
        writer.comment("manifest: " + manifest.hash());
        writer.header({"k", "R", "im_sigma", "branch", "mode", "status"});
        // Emit traced points; grid k values with no stationary point are failures.
        std::vector<double> grid;
        for (double k = kr.k_min; k <= kr.k_max + 0.5 * kr.k_step; k += kr.k_step)
            grid.push_back(std::min(k, kr.k_max));
        std::size_t ci = 0;
        for (const double k : grid) {
            bool any = false;
            while (ci < curve.size() && curve[ci].k <= k + 1e-9) {
                const NeutralPoint& pt = curve[ci];
                writer.row({csv_num(pt.k), csv_num(pt.rayleigh), csv_num(pt.sigma_im),
                            to_string(pt.branch), std::to_string(pt.mode), "ok"});
                any = true;
                ++ci;
            }
            if (!any)
                writer.row({csv_num(k), "", "", "", "", "failed"});
        }
        writer.commit();
        manifest.outputs = {"neutral_curve.csv"};
        write_manifest(manifest, opt.out_dir);
        return kExitOk;
    });
}

int cmd_critical(const CommandOptions& opt) {
    return run_guarded([&]() {
        const CaseConfig cfg = load_config(opt.config_path);
        const KRange kr = k_range(cfg, opt);
        const CasePipeline cp = build_case(cfg);
        RunManifest manifest = make_manifest(cfg, cp.taxis);

        const CriticalPoint crit = find_critical(cp, kr.k_min, kr.k_max, kr.k_step);

        CsvWriter writer(fs::path(opt.out_dir) / "critical_point.csv");
        writer.comment("manifest: " + manifest.hash());
        writer.header({"vc", "tau_h", "omega", "b_flux", "a_coeff", "lambda_c", "r_c", "im_sigma",
                       "mode", "branch", "top_boundary"});
        writer.row({csv_num(cfg.params.swim_speed), csv_num(cfg.params.extinction),
                    csv_num(cfg.params.albedo), csv_num(cfg.params.diffuse_flux),
                    csv_num(cfg.params.aniso_coeff), csv_num(crit.lambda_c),
                    csv_num(crit.rayleigh_c), csv_num(crit.sigma_im), std::to_string(crit.mode),
                    to_string(crit.branch), to_string(cfg.params.top_boundary)});
        writer.commit();
        manifest.outputs = {"critical_point.csv"};
        write_manifest(manifest, opt.out_dir);
        return kExitOk;
    });
}

int cmd_sweep(const CommandOptions& opt) {
    return run_guarded([&]() {
        const CaseConfig base = load_config(opt.config_path);
        const KRange kr = k_range(base, opt);
        if (opt.sweep_file.empty()) throw ValidationError("sweep: --sweep-file is required");
        const auto axes = parse_sweep_file(opt.sweep_file);
        const TaxisFunction taxis_for_manifest = default_taxis(base.params.critical_intensity);
        RunManifest manifest = make_manifest(base, taxis_for_manifest);

        // Cartesian product; the last axis varies fastest.
        std::vector<std::vector<std::string>> tuples;
        if (!axes.empty()) {
            std::size_t total = 1;
            for (const auto& a : axes) total *= a.values.size();
            tuples.reserve(total);
            for (std::size_t t = 0; t < total; ++t) {
                std::vector<std::string> tuple(axes.size());
                std::size_t rem = t;
                for (std::size_t a = axes.size(); a-- > 0;) {
                    tuple[a] = axes[a].values[rem % axes[a].values.size()];
                    rem /= axes[a].values.size();
                }
                tuples.push_back(std::move(tuple));
            }
        }
        std::vector<SweepRow> rows(tuples.size());
        std::atomic<std::size_t> next{0};
        const int n_workers = std::max(
            1, opt.workers > 0 ? opt.workers : static_cast<int>(std::thread::hardware_concurrency()));

        auto worker = [&]() {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= tuples.size()) return;
                SweepRow& row = rows[i];
                row.params = base.params;
                try {
                    for (std::size_t a = 0; a < axes.size(); ++a)
                        apply_sweep_value(row.params, axes[a].key, tuples[i][a]);
                    row.params.validate();
                    CaseConfig cfg = base;
                    cfg.params = row.params;
                    const CasePipeline cp =
                        build_case(cfg, default_taxis(cfg.params.critical_intensity));
                    row.cp = find_critical(cp, kr.k_min, kr.k_max, kr.k_step);
                    row.ok = true;
                    row.status = "ok";
                } catch (const std::exception& e) {
                    row.ok = false;
                    row.status = sanitize(e.what());
                }
            }
        };
        std::vector<std::thread> pool;
        for (int t = 0; t < n_workers; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();

        CsvWriter writer(fs::path(opt.out_dir) / "sweep_results.csv");
        writer.comment("manifest: " + manifest.hash());
        writer.header({"vc", "tau_h", "omega", "b_flux", "a_coeff", "lambda_c", "r_c", "im_sigma",
                       "mode", "branch", "top_boundary", "status"});
        bool any_failed = false;
        for (const SweepRow& row : rows) {
            if (row.ok) {
                writer.row({csv_num(row.params.swim_speed), csv_num(row.params.extinction),
                            csv_num(row.params.albedo), csv_num(row.params.diffuse_flux),
                            csv_num(row.params.aniso_coeff), csv_num(row.cp.lambda_c),
                            csv_num(row.cp.rayleigh_c), csv_num(row.cp.sigma_im),
                            std::to_string(row.cp.mode), to_string(row.cp.branch),
                            to_string(row.params.top_boundary), "ok"});
            } else {
                any_failed = true;
                writer.row({csv_num(row.params.swim_speed), csv_num(row.params.extinction),
                            csv_num(row.params.albedo), csv_num(row.params.diffuse_flux),
                            csv_num(row.params.aniso_coeff), "", "", "", "", "",
                            to_string(row.params.top_boundary), row.status});
            }
        }
        writer.commit();
        manifest.outputs = {"sweep_results.csv"};
        write_manifest(manifest, opt.out_dir);
        return any_failed ? kExitPartialSweep : kExitOk;
    });
}

int cmd_evolve(const CommandOptions& opt, double k, double n_periods, int n_frames) {
    return run_guarded([&]() {
        if (!(k > 0.0)) throw ValidationError("evolve: k must be > 0");
        if (n_frames < 1) throw ValidationError("evolve: n_frames must be >= 1");
        if (n_periods < 0.0) throw ValidationError("evolve: n_periods must be >= 0");
        const CaseConfig cfg = load_config(opt.config_path);
        const CasePipeline cp = build_case(cfg);
        RunManifest manifest = make_manifest(cfg, cp.taxis);
        const std::string hash = manifest.hash();

        const NeutralResult res = solve_neutral_at(cp, k);
        std::vector<double> times;
        if (res.point.branch == BranchType::stationary) {
            if (n_periods > 0.0)
                throw DomainError(
                    "evolve: the neutral mode at this k is stationary; request n_periods = 0 "
                    "for a single snapshot");
            times = {0.0};
        } else if (n_periods == 0.0 || n_frames == 1) {
            times = {0.0};
        } else {
            const double span = n_periods * oscillation_period(res.point);
            times.resize(n_frames);
            for (int i = 0; i < n_frames; ++i) times[i] = span * i / (n_frames - 1);
        }

        const Evolution ev = reconstruct_evolution(res.point, res.pair, cp.state.grid, times, 65);

        const fs::path out(opt.out_dir);
        manifest.outputs.clear();
        for (std::size_t fidx = 0; fidx < ev.frames.size(); ++fidx) {
            char name[48];
            std::snprintf(name, sizeof(name), "evolve_frame_%03zu.csv", fidx);
            CsvWriter writer(out / name);
            writer.comment("manifest: " + hash);
            writer.comment("t = " + csv_num(ev.frames[fidx].t));
            writer.header({"x", "z", "w1", "n1"});
            const EvolutionFrame& fr = ev.frames[fidx];
            for (std::size_t ix = 0; ix < fr.x.size(); ++ix)
                for (std::size_t iz = 0; iz < fr.z.size(); ++iz)
                    writer.row({csv_num(fr.x[ix]), csv_num(fr.z[iz]), csv_num(fr.w1(ix, iz)),
                                csv_num(fr.n1(ix, iz))});
            writer.commit();
            manifest.outputs.push_back(name);
        }

        // Dense phase-portrait series over the same span.
        {
            std::vector<double> ts;
            const int n_samples = 512;
            const double span = times.back();
            ts.resize(n_samples);
            for (int i = 0; i < n_samples; ++i)
                ts[i] = span > 0.0 ? span * i / (n_samples - 1) : 0.0;
            if (span == 0.0) ts = {0.0};
            const Evolution orbit = reconstruct_evolution(res.point, res.pair, cp.state.grid,
                                                          ts, 2);
            CsvWriter writer(out / "phase_portrait.csv");
            writer.comment("manifest: " + hash);
            writer.header({"t", "w1", "dw1_dt"});
            for (const PhasePoint& pp : orbit.orbit)
                writer.row({csv_num(pp.t), csv_num(pp.w1), csv_num(pp.dw1_dt)});
            writer.commit();
            manifest.outputs.push_back("phase_portrait.csv");
        }
        write_manifest(manifest, opt.out_dir);
        return kExitOk;
    });
}

}  // namespace biostab
