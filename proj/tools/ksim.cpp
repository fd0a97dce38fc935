// ksim: density-suppressed motility chemotaxis simulator.
//
//   ksim run <config.json> [--set key=value]...
//   ksim h0 --kind sigmoid --k 8 --vstar 1 | --kind constant --gamma0 G
//   ksim sweep <sweep.json> --parallel N
//   ksim figures <1..9> --scale desk|paper

#include <iostream>

#include "CLI11.hpp"
#include "ksim/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Finite-difference simulator for u_t = lap(gamma(v) u) + r - mu u, v_t = lap(v) - v + u"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    auto* run = app.add_subcommand("run", "Run one simulation from a JSON config");
    run->add_option("config", config_path, "Config file")->required();
    run->add_option("--set", overrides, "Override a config entry, key=value (repeatable)");

    ksim::cli::H0Request h0;
    double vmax = 0.0;
    auto* h0_cmd = app.add_subcommand("h0", "Print H0 constants and convergence thresholds");
    h0_cmd->add_option("--kind", h0.kind, "sigmoid or constant")->capture_default_str();
    h0_cmd->add_option("--k", h0.k, "Sigmoid steepness")->capture_default_str();
    h0_cmd->add_option("--vstar", h0.v_star, "Sigmoid center")->capture_default_str();
    h0_cmd->add_option("--gamma0", h0.gamma0, "Constant motility value")->capture_default_str();
    auto* vmax_opt = h0_cmd->add_option("--vmax", vmax, "Search horizon (default 10 max(vstar, 1))");
    h0_cmd->add_option("--mode", h0.mode, "H0 used for the thresholds: quadratic or linear")->capture_default_str();

    std::string sweep_path;
    int parallel = 1;
    auto* sweep = app.add_subcommand("sweep", "Run the cross product of a parameter sweep");
    sweep->add_option("spec", sweep_path, "Sweep file")->required();
    sweep->add_option("--parallel", parallel, "Concurrent runs")->capture_default_str();

    int figure = 0;
    std::string scale = "desk";
    std::string figures_root = "figures";
    auto* figures = app.add_subcommand("figures", "Run a built-in figure scenario");
    figures->add_option("figure", figure, "Figure id 1..9")->required();
    figures->add_option("--scale", scale, "desk or paper")->capture_default_str();
    figures->add_option("--out", figures_root, "Output root")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : ksim::cli::kExitConfigError;
    }

    if (*run) return ksim::cli::cmd_run(config_path, overrides, std::cout, std::cerr);
    if (*h0_cmd) {
        if (*vmax_opt) h0.v_max = vmax;
        return ksim::cli::cmd_h0(h0, std::cout, std::cerr);
    }
    if (*sweep) return ksim::cli::cmd_sweep(sweep_path, parallel, std::cout, std::cerr);
    if (*figures) return ksim::cli::cmd_figures(figure, scale, figures_root, std::cout, std::cerr);
    return ksim::cli::kExitConfigError;
}
