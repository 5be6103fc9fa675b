#pragma once

#include <optional>
#include <string>

namespace biostab {

/// Exit codes shared by all verbs.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitSolverError = 3;
inline constexpr int kExitPartialSweep = 4;

struct CommandOptions {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<double> k_min, k_max, k_step;  // override config when set
    int workers = 0;                             // 0 = logical core count
    std::string sweep_file;
};

/// steady: uniform-suspension intensity profile + basic-state profile CSVs.
int cmd_steady(const CommandOptions& opt);

/// neutral: neutral-curve CSV (k, R, im_sigma, branch, mode, status).
int cmd_neutral(const CommandOptions& opt);

/// critical: one-row CSV with the critical point.
int cmd_critical(const CommandOptions& opt);

/// sweep: results table over the cartesian product in the sweep file.
int cmd_sweep(const CommandOptions& opt);

/// evolve: eigenfunction snapshots over n_periods cycles + phase portrait.
int cmd_evolve(const CommandOptions& opt, double k, double n_periods, int n_frames);

}  // namespace biostab
