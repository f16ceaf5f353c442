#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wtsim/cli.hpp"
#include "wtsim/config.hpp"

int main(int argc, char** argv) {
    CLI::App app{"PMSG wind turbine / back-to-back converter scenario runner"};
    app.require_subcommand(1);

    wtsim::RunManifest manifest;
    std::string vary;
    std::string dir_a;
    std::string dir_b;

    auto* run = app.add_subcommand("run", "simulate one scenario");
    run->add_option("config", manifest.config_path, "scenario config file")->required();
    run->add_option("--set", manifest.overrides, "override: section.key=value");
    run->add_option("--out", manifest.out_dir, "output directory (default: out)");
    run->add_flag("--gnuplot", manifest.gnuplot, "also write plots.gp");

    auto* compare = app.add_subcommand("compare", "compare a baseline run with a supported run");
    compare->add_option("baseline_dir", dir_a, "baseline run directory")->required();
    compare->add_option("supported_dir", dir_b, "supported run directory")->required();

    auto* sweep = app.add_subcommand("sweep", "run a scenario over a parameter range");
    sweep->add_option("config", manifest.config_path, "scenario config file")->required();
    sweep->add_option("--vary", vary, "section.key=start:stop:step")->required();
    sweep->add_option("--set", manifest.overrides, "override: section.key=value");
    sweep->add_option("--out", manifest.out_dir, "output directory (default: out)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : wtsim::exit_parse_error;
    }

    try {
        if (run->parsed())
            return wtsim::cmd_run(manifest);
        if (compare->parsed())
            return wtsim::cmd_compare(dir_a, dir_b);
        if (sweep->parsed())
            return wtsim::cmd_sweep(manifest, wtsim::parse_sweep_spec(vary));
    } catch (const wtsim::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.kind == wtsim::ConfigError::Kind::parse ? wtsim::exit_parse_error
                                                         : wtsim::exit_validation_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return wtsim::exit_io_error;
    }
    return wtsim::exit_ok;
}
