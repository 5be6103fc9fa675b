#include "biostab/cases.hpp"

#include <algorithm>

#include "biostab/errors.hpp"

namespace biostab {

CasePipeline build_case(const CaseConfig& cfg) {
    return build_case(cfg, default_taxis(cfg.params.critical_intensity));
}

CasePipeline build_case(const CaseConfig& cfg, const TaxisFunction& taxis) {
    CasePipeline cp;
    cp.params = cfg.params;
    cp.numerics = cfg.numerics;
    cp.taxis = taxis;
    cp.field = solve_fredholm(cfg.params, 201, cfg.numerics.tol_fredholm);
    cp.state = make_basic_state(cfg.params, cp.field, cp.taxis, cfg.numerics.n_z);
    cp.dirs = make_direction_set(cfg.numerics.n_mu, cfg.numerics.n_phi);
    return cp;
}

NeutralResult solve_neutral_at(const CasePipeline& cp, double k, const NeutralOptions& opts) {
    const MomentOperator mop = moment_operator(cp.state, k, 0.0, cp.dirs);
    NeutralOptions o = opts;
    o.tol_f = std::min(o.tol_f, cp.numerics.tol_eigen);
    return neutral_point(k, cp.params, cp.state, mop, o);
}

std::vector<NeutralPoint> trace_case(const CasePipeline& cp, double k_min, double k_max,
                                     double k_step) {
    TraceOptions topts;
    topts.neutral.tol_f = cp.numerics.tol_eigen;
    return trace_neutral_curve(cp.params, cp.state, cp.dirs, k_min, k_max, k_step, topts);
}

CriticalPoint find_critical(const CasePipeline& cp, double k_min, double k_max, double k_step) {
    const auto curve = trace_case(cp, k_min, k_max, k_step);
    if (curve.empty())
        throw BracketingError("find_critical: no neutral points found in the k-range");
    // Warm-started evaluator for the golden-section refinement.
    double r_warm = std::min_element(curve.begin(), curve.end(), [](auto& a, auto& b) {
                        return a.rayleigh < b.rayleigh;
                    })->rayleigh;
    NeutralEvaluator eval = [&cp, &r_warm](double k) {
        NeutralOptions o;
        o.tol_f = cp.numerics.tol_eigen;
        o.scan_from_bottom = false;
        o.r_guess = r_warm;
        const NeutralResult res = solve_neutral_at(cp, k, o);
        r_warm = res.point.rayleigh;
        return res.point;
    };
    return critical_point(curve, eval);
}

}  // namespace biostab
