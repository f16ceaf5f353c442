#pragma once

#include <string>
#include <vector>

#include "wtsim/sim.hpp"

namespace wtsim {

// Exit-code contract shared by the CLI and the in-process command functions.
inline constexpr int exit_ok = 0;
inline constexpr int exit_parse_error = 2;
inline constexpr int exit_validation_error = 3;
inline constexpr int exit_run_failure = 4;
inline constexpr int exit_io_error = 5;
inline constexpr int exit_compare_mismatch = 6;

struct RunManifest {
    std::string config_path;
    std::string out_dir = "out";
    std::vector<std::string> overrides;  // "section.key=value"
    bool gnuplot = false;
};

// Runs one scenario; writes timeseries.csv, report.json and manifest.txt
// (plus plots.gp when requested) into out_dir.
int cmd_run(const RunManifest& manifest);

// Reads report.json from two completed run directories (baseline first) and
// prints the side-by-side sag metrics and the improvement percentage.
int cmd_compare(const std::string& baseline_dir, const std::string& supported_dir);

struct SweepSpec {
    std::string key;
    double start = 0.0;
    double stop = 0.0;
    double step = 0.0;
};

// "section.key=start:stop:step"
SweepSpec parse_sweep_spec(const std::string& text);

// One run directory per sweep point under manifest.out_dir.
int cmd_sweep(const RunManifest& manifest, const SweepSpec& sweep);

// Helpers shared with the tests.
void write_report_json(const ScenarioReport& report, const std::string& path);
ScenarioReport read_report_json(const std::string& path);

}  // namespace wtsim
