#include "wtsim/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "wtsim/config.hpp"
#include "wtsim/csv.hpp"

namespace wtsim {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const char* status_name(RunStatus s) {
    switch (s) {
    case RunStatus::ok: return "ok";
    case RunStatus::dc_link_collapse: return "dc_link_collapse";
    case RunStatus::non_finite_state: return "non_finite_state";
    }
    return "unknown";
}

int exit_for(const ConfigError& e) {
    switch (e.kind) {
    case ConfigError::Kind::parse: return exit_parse_error;
    case ConfigError::Kind::validation: return exit_validation_error;
    case ConfigError::Kind::io: return exit_parse_error;  // missing/unreadable config
    }
    return exit_parse_error;
}

void write_gnuplot_script(const std::string& dir) {
    std::ofstream gp(dir + "/plots.gp");
    gp << "# gnuplot script for the run in this directory\n"
          "set datafile separator ','\n"
          "set key autotitle columnhead\n"
          "set xlabel 't [s]'\n"
          "set terminal pngcairo size 1200,900\n"
          "set output 'run.png'\n"
          "set multiplot layout 3,2\n"
          "plot 'timeseries.csv' using 1:2 with lines title 'v_pcc [pu]'\n"
          "plot 'timeseries.csv' using 1:3 with lines title 'v_dc [V]'\n"
          "plot 'timeseries.csv' using 1:4 with lines title 'p_inj [W]'\n"
          "plot 'timeseries.csv' using 1:5 with lines title 'q_inj [var]'\n"
          "plot 'timeseries.csv' using 1:6 with lines title 'i_rms [A]'\n"
          "plot 'timeseries.csv' using 1:7 with lines title 'w_m [rad/s]'\n"
          "unset multiplot\n";
}

void write_manifest(const RunManifest& m, const ScenarioConfig& cfg,
                    const std::string& dir) {
    std::ofstream out(dir + "/manifest.txt");
    out << "config = " << m.config_path << '\n';
    for (const auto& ov : m.overrides)
        out << "set = " << ov << '\n';
    out << "config_hash = " << cfg.config_hash << '\n';
}

std::string fmt_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void write_report_json(const ScenarioReport& report, const std::string& path) {
    json j;
    j["status"] = status_name(report.status);
    j["diagnostic"] = report.diagnostic;
    j["sag_depth_pu"] = report.sag_depth_pu;
    j["v_dc_max_dev_pu"] = report.v_dc_max_dev_pu;
    j["p_ss_w"] = report.p_ss_w;
    j["q_peak_var"] = report.q_peak_var;
    j["p_prefault_w"] = report.p_prefault_w;
    j["q_prefault_var"] = report.q_prefault_var;
    j["fault_enabled"] = report.fault_enabled;
    j["fault_t_on"] = report.fault_t_on;
    j["fault_t_off"] = report.fault_t_off;
    j["energy_wind_j"] = report.energy.e_wind;
    j["energy_grid_j"] = report.energy.e_grid;
    j["energy_stator_loss_j"] = report.energy.e_stator_loss;
    j["energy_line_loss_j"] = report.energy.e_line_loss;
    j["energy_friction_j"] = report.energy.e_friction;
    j["energy_d_kinetic_j"] = report.energy.d_kinetic;
    j["energy_d_dc_j"] = report.energy.d_dc;
    j["energy_d_magnetic_j"] = report.energy.d_magnetic;
    j["energy_residual_frac"] = report.energy.residual_frac();
    j["config_hash"] = report.config_hash;

    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open for writing: " + path);
    out << j.dump(2) << '\n';
}

ScenarioReport read_report_json(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open report: " + path);
    json j;
    in >> j;

    ScenarioReport r;
    const std::string status = j.at("status").get<std::string>();
    r.status = status == "ok" ? RunStatus::ok
               : status == "dc_link_collapse" ? RunStatus::dc_link_collapse
                                              : RunStatus::non_finite_state;
    r.diagnostic = j.value("diagnostic", "");
    r.sag_depth_pu = j.at("sag_depth_pu").get<double>();
    r.v_dc_max_dev_pu = j.at("v_dc_max_dev_pu").get<double>();
    r.p_ss_w = j.at("p_ss_w").get<double>();
    r.q_peak_var = j.at("q_peak_var").get<double>();
    r.p_prefault_w = j.value("p_prefault_w", 0.0);
    r.q_prefault_var = j.value("q_prefault_var", 0.0);
    r.fault_enabled = j.at("fault_enabled").get<bool>();
    r.fault_t_on = j.at("fault_t_on").get<double>();
    r.fault_t_off = j.at("fault_t_off").get<double>();
    r.config_hash = j.value("config_hash", std::uint64_t{0});
    return r;
}

int cmd_run(const RunManifest& manifest) {
    ScenarioConfig cfg;
    try {
        cfg = load_scenario(manifest.config_path, manifest.overrides);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_for(e);
    }

    std::error_code ec;
    fs::create_directories(manifest.out_dir, ec);
    if (ec || !fs::is_directory(manifest.out_dir)) {
        std::cerr << "error: cannot create output directory " << manifest.out_dir << '\n';
        return exit_io_error;
    }

    const RunResult result = run_scenario(cfg);
    try {
        write_timeseries_csv(result.series, manifest.out_dir + "/timeseries.csv");
        write_report_json(result.report, manifest.out_dir + "/report.json");
        write_manifest(manifest, cfg, manifest.out_dir);
        if (manifest.gnuplot)
            write_gnuplot_script(manifest.out_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_io_error;
    }

    if (!result.ok()) {
        std::cerr << "run failed: " << result.report.diagnostic << '\n';
        return exit_run_failure;
    }
    std::cout << "run ok: sag_depth_pu=" << result.report.sag_depth_pu
              << " v_dc_max_dev_pu=" << result.report.v_dc_max_dev_pu
              << " p_ss_w=" << result.report.p_ss_w
              << " q_peak_var=" << result.report.q_peak_var << '\n';
    return exit_ok;
}

int cmd_compare(const std::string& baseline_dir, const std::string& supported_dir) {
    ScenarioReport base;
    ScenarioReport supp;
    try {
        base = read_report_json(baseline_dir + "/report.json");
        supp = read_report_json(supported_dir + "/report.json");
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_compare_mismatch;
    }

    if (base.fault_enabled != supp.fault_enabled || base.fault_t_on != supp.fault_t_on ||
        base.fault_t_off != supp.fault_t_off) {
        std::cerr << "error: fault windows differ between runs\n";
        return exit_compare_mismatch;
    }

    const double sag_b = std::max(0.0, 1.0 - base.sag_depth_pu);
    const double sag_s = std::max(0.0, 1.0 - supp.sag_depth_pu);
    std::cout << "baseline:  residual v_pcc = " << base.sag_depth_pu
              << " pu, sag = " << sag_b << " pu\n";
    std::cout << "supported: residual v_pcc = " << supp.sag_depth_pu
              << " pu, sag = " << sag_s << " pu\n";

    const auto improvement = compare_runs(base, supp);
    if (!improvement) {
        std::cout << "improvement_pct = not-applicable (baseline shows no sag)\n";
        return exit_ok;
    }
    std::cout << "improvement_pct = " << *improvement << '\n';
    return exit_ok;
}

SweepSpec parse_sweep_spec(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError(ConfigError::Kind::validation, text,
                          "expected key=start:stop:step");
    SweepSpec s;
    s.key = text.substr(0, eq);
    const std::string range = text.substr(eq + 1);
    const auto c1 = range.find(':');
    const auto c2 = range.find(':', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        throw ConfigError(ConfigError::Kind::validation, s.key,
                          "expected key=start:stop:step");
    try {
        s.start = std::stod(range.substr(0, c1));
        s.stop = std::stod(range.substr(c1 + 1, c2 - c1 - 1));
        s.step = std::stod(range.substr(c2 + 1));
    } catch (const std::exception&) {
        throw ConfigError(ConfigError::Kind::validation, s.key, "malformed sweep range");
    }
    if (s.step <= 0.0)
        throw ConfigError(ConfigError::Kind::validation, s.key, "sweep step must be > 0");
    if (s.stop < s.start)
        throw ConfigError(ConfigError::Kind::validation, s.key, "sweep stop must be >= start");
    return s;
}

int cmd_sweep(const RunManifest& manifest, const SweepSpec& sweep) {
    int worst = exit_ok;
    int index = 0;
    for (double v = sweep.start; v <= sweep.stop + 1e-12 * std::abs(sweep.stop);
         v += sweep.step, ++index) {
        char dir_name[32];
        std::snprintf(dir_name, sizeof(dir_name), "point_%03d", index);

        RunManifest point = manifest;
        point.out_dir = manifest.out_dir + "/" + dir_name;
        point.overrides.push_back(sweep.key + "=" + fmt_full(v));

        const int rc = cmd_run(point);
        std::cout << dir_name << ": " << sweep.key << "=" << v << " -> exit " << rc << '\n';
        if (rc != exit_ok)
            worst = rc;
    }
    if (index == 0) {
        std::cerr << "error: empty sweep range\n";
        return exit_validation_error;
    }
    return worst;
}

}  // namespace wtsim
