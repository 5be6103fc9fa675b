#pragma once

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "biostab/basic_state.hpp"
#include "biostab/directions.hpp"
#include "biostab/perturbed_rte.hpp"

namespace biostab {

enum class BranchType { stationary, oscillatory };
std::string to_string(BranchType b);

/// One point of a neutral curve: R with max Re sigma = 0 at wavenumber k.
struct NeutralPoint {
    double k = 0.0;
    double rayleigh = 0.0;
    double sigma_im = 0.0;  // |Im sigma| at neutrality
    BranchType branch = BranchType::stationary;
    int mode = 1;  // vertical cell count
};

/// Minimum of the neutral curve.
struct CriticalPoint {
    double k_c = 0.0;
    double rayleigh_c = 0.0;
    double lambda_c = 0.0;  // 2 pi / k_c
    double sigma_im = 0.0;
    BranchType branch = BranchType::stationary;
    int mode = 1;
    bool at_range_edge = false;  // minimum sits on the traced k-range boundary
};

/// Collocated generalized eigenproblem (a0 + R a_r) x = sigma b x over
/// x = (W, Theta), with boundary rows bordered in (4 on W, 2 on Theta).
struct StabilityOperator {
    Eigen::MatrixXcd a0, a_r, b;
    int nn = 0;  // nodes per block
    double k = 0.0;
    double schmidt = 0.0;
    std::uint64_t state_hash = 0;
};

struct Eigenpair {
    std::complex<double> sigma;
    Eigen::VectorXcd w, theta;  // nodal profiles, canonically normalized
};

struct SpectrumOptions {
    double sigma_cutoff = 1e6;         // discard |sigma| above this
    double boundary_energy_max = 0.5;  // discard modes living at wall-adjacent nodes
    double tol_freq = 1e-3;            // |Im sigma| below this counts as stationary
};

StabilityOperator assemble_operator(const BasicState& state, double k, const ProblemParams& p,
                                    const MomentOperator& mop);

/// Filtered spectrum at a given Rayleigh number, sorted by Re sigma descending.
std::vector<std::complex<double>> growth_spectrum(const StabilityOperator& op, double rayleigh,
                                                  const SpectrumOptions& opts = {});

/// Same, with eigenvectors.
std::vector<Eigenpair> growth_eigenpairs(const StabilityOperator& op, double rayleigh,
                                         const SpectrumOptions& opts = {});

struct NeutralOptions {
    double tol_f = 1e-8;   // |max Re sigma| at the accepted root
    double r_min = 1.0;
    double r_max = 1e7;
    double r_guess = 1e3;  // warm start for the bracket search
    bool scan_from_bottom = true;  // guarantees the lowest neutral R
    int branch_index = 1;          // n-th sign change when scanning from the bottom
    SpectrumOptions spec{};
};

struct NeutralResult {
    NeutralPoint point;
    Eigenpair pair;
};

/// Root-find on R such that the leading growth rate vanishes.
/// Throws BracketingError when no sign change exists in [r_min, r_max].
NeutralResult neutral_point(double k, const ProblemParams& p, const BasicState& state,
                            const MomentOperator& mop, const NeutralOptions& opts = {});

struct TraceOptions {
    NeutralOptions neutral{};
    double osc_search_span = 64.0;  // oscillatory roots searched in [R_stat/span, ~R_stat]
};

/// Continuation in k, warm-started in R; emits the stationary-branch point at
/// every k and the oscillatory-branch point wherever one exists. Failed k
/// points are skipped, never fabricated.
std::vector<NeutralPoint> trace_neutral_curve(const ProblemParams& p, const BasicState& state,
                                              const DirectionSet& dirs, double k_min, double k_max,
                                              double k_step, const TraceOptions& opts = {});

using NeutralEvaluator = std::function<NeutralPoint(double k)>;

struct CriticalOptions {
    double k_tol = 5e-3;  // absolute golden-section window width in k
};

/// Minimum of the curve, refined by golden section through the evaluator when
/// one is supplied (with a final parabolic polish), else by a parabola through
/// the discrete neighbors.
CriticalPoint critical_point(std::span<const NeutralPoint> curve,
                             const NeutralEvaluator& evaluate = {},
                             const CriticalOptions& opts = {});

/// 1 + number of strict interior sign changes of the phase-aligned real part.
int classify_mode(const Eigen::VectorXcd& w);

/// Linear-mode reconstruction at neutrality.
struct EvolutionFrame {
    double t = 0.0;
    std::vector<double> x, z;
    Eigen::MatrixXd w1, n1;  // (x index, z index)
};
struct PhasePoint {
    double t, w1, dw1_dt;
};
struct Evolution {
    std::vector<EvolutionFrame> frames;
    std::vector<PhasePoint> orbit;  // sampled at x = 0, z = argmax |W|
};

Evolution reconstruct_evolution(const NeutralPoint& pt, const Eigenpair& pair,
                                const ChebyshevGrid& grid, std::span<const double> times,
                                int x_samples);

/// Oscillation period 2 pi / |Im sigma|; DomainError for a stationary point.
double oscillation_period(const NeutralPoint& pt);

}  // namespace biostab
