#include <CLI11.hpp>

#include "biostab/commands.hpp"
#include "biostab/version.hpp"

int main(int argc, char** argv) {
    CLI::App app{"biostab: onset of phototactic bioconvection in a forward-scattering "
                 "algal suspension under diffuse illumination"};
    app.set_version_flag("--version", biostab::kVersion);
    app.require_subcommand(1);

    biostab::CommandOptions opt;
    double k = 2.0;
    double n_periods = 1.0;
    int n_frames = 8;

    auto add_common = [&](CLI::App* sub, bool with_krange) {
        sub->add_option("--config", opt.config_path, "case config file")->required();
        sub->add_option("--out", opt.out_dir, "output directory (default .)");
        if (with_krange) {
            sub->add_option("--k-min", [&](const CLI::results_t& r) {
                opt.k_min = std::stod(r[0]);
                return true;
            }, "lowest traced wavenumber (overrides config)");
            sub->add_option("--k-max", [&](const CLI::results_t& r) {
                opt.k_max = std::stod(r[0]);
                return true;
            }, "highest traced wavenumber (overrides config)");
            sub->add_option("--k-step", [&](const CLI::results_t& r) {
                opt.k_step = std::stod(r[0]);
                return true;
            }, "wavenumber increment (overrides config)");
        }
    };

    CLI::App* steady = app.add_subcommand("steady", "steady radiative field and basic state");
    add_common(steady, false);

    CLI::App* neutral = app.add_subcommand("neutral", "trace the neutral stability curve");
    add_common(neutral, true);

    CLI::App* critical = app.add_subcommand("critical", "critical Rayleigh number and wavenumber");
    add_common(critical, true);

    CLI::App* sweep = app.add_subcommand("sweep", "parameter sweep over a tuple file");
    add_common(sweep, true);
    sweep->add_option("--sweep-file", opt.sweep_file, "sweep specification file")->required();
    sweep->add_option("--workers", opt.workers, "worker threads (default: logical cores)");

    CLI::App* evolve = app.add_subcommand("evolve", "eigenfunction time evolution at one k");
    add_common(evolve, false);
    evolve->add_option("--k", k, "wavenumber of the neutral mode")->required();
    evolve->add_option("--n-periods", n_periods, "oscillation periods to span (default 1)");
    evolve->add_option("--n-frames", n_frames, "snapshot count (default 8)");

    CLI11_PARSE(app, argc, argv);

    if (steady->parsed()) return biostab::cmd_steady(opt);
    if (neutral->parsed()) return biostab::cmd_neutral(opt);
    if (critical->parsed()) return biostab::cmd_critical(opt);
    if (sweep->parsed()) return biostab::cmd_sweep(opt);
    if (evolve->parsed()) return biostab::cmd_evolve(opt, k, n_periods, n_frames);
    return biostab::kExitConfigError;
}
