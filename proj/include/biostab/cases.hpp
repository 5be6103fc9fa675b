#pragma once

#include <vector>

#include "biostab/config.hpp"
#include "biostab/stability.hpp"

namespace biostab {

/// Everything needed to answer stability questions for one parameter case.
struct CasePipeline {
    ProblemParams params;
    NumericsConfig numerics;
    TaxisFunction taxis;
    RadiativeField field;
    BasicState state;
    DirectionSet dirs;
};

/// Solves the radiative field and basic state for a config, using the shipped
/// default taxis function at the configured critical intensity.
CasePipeline build_case(const CaseConfig& cfg);

/// Same, with a caller-supplied taxis function.
CasePipeline build_case(const CaseConfig& cfg, const TaxisFunction& taxis);

/// Neutral point at one wavenumber (moment operator built at m1 = k, m2 = 0).
NeutralResult solve_neutral_at(const CasePipeline& cp, double k, const NeutralOptions& opts = {});

/// Neutral curve over the configured (or overridden) k-range.
std::vector<NeutralPoint> trace_case(const CasePipeline& cp, double k_min, double k_max,
                                     double k_step);

/// Trace plus golden-section refinement of the minimum.
CriticalPoint find_critical(const CasePipeline& cp, double k_min, double k_max, double k_step);

}  // namespace biostab
