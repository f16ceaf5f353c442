#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wtsim/control.hpp"
#include "wtsim/converter.hpp"
#include "wtsim/grid.hpp"
#include "wtsim/pmsg.hpp"
#include "wtsim/transforms.hpp"
#include "wtsim/turbine.hpp"

namespace wtsim {

enum class SpeedRefMode { rated, mppt };
enum class QRefMode { constant, droop };

struct PiGains {
    double kp = 0.0;
    double ki = 0.0;
    double out_min = 0.0;
    double out_max = 0.0;
};

struct ControlConfig {
    PiGains speed;   // -> i_sq reference, A
    PiGains msc_id;  // -> v_sd', V
    PiGains msc_iq;  // -> v_sq', V
    PiGains vdc;     // -> i_d reference, A (negative gains: plant gain is negative)
    PiGains q;       // -> i_q reference, A (negative gains, same reason)
    PiGains gsc_id;  // -> v_d', V
    PiGains gsc_iq;  // -> v_q', V

    SpeedRefMode w_ref_mode = SpeedRefMode::mppt;
    double w_rated = 0.0;   // rad/s mechanical
    double i_sd_ref = 0.0;  // A, converter convention

    double v_dc_ref = 0.0;  // V
    QRefMode q_ref_mode = QRefMode::constant;
    double q_ref_const = 0.0;  // var
    DroopParams droop;

    AngleMode angle_mode = AngleMode::ideal;
    double pll_kp = 0.0;
    double pll_ki = 0.0;
    double theta0 = 0.0;  // grid source phase at t = 0

    // Series inductance the GSC decoupling terms assume; defaults to the
    // physical converter branch when left at 0.
    double l_decouple = 0.0;

    // First-order low-pass on the PCC voltage used for the GSC feedforward
    // and the droop input.  A one-sample-delayed unity feedforward couples
    // back through the grid impedance and destabilizes the current loops on
    // weak grids; the filter breaks that path.
    double vff_tau = 1e-4;  // s

    bool msc_feedforward = true;
    bool gsc_feedforward = true;
};

// Piecewise-constant wind profile: base speed plus optional step changes.
struct WindProfile {
    double base = 0.0;                               // m/s
    std::vector<std::pair<double, double>> steps;    // (time s, speed m/s), ascending

    double at(double t) const {
        double v = base;
        for (const auto& [ts, vs] : steps) {
            if (t >= ts)
                v = vs;
            else
                break;
        }
        return v;
    }
};

struct ConverterConfig {
    double c_dc = 0.0;            // F
    double m_max = 1.15;
    double v_dc_floor_frac = 0.01;  // collapse floor as a fraction of v_dc_ref
    double v_dc_init = 0.0;         // V; 0 means "start at v_dc_ref"
};

struct ScenarioConfig {
    TurbineParams turbine;
    MechParams mech;
    PmsgParams pmsg;
    ConverterConfig converter;
    GridParams grid;
    FaultSpec fault;
    ControlConfig ctrl;
    WindProfile wind;

    double t_end = 0.0;      // s
    double dt_plant = 0.0;   // s
    double dt_ctrl = 0.0;    // s, integer multiple of dt_plant
    double sample_dt = 0.0;  // s, integer multiple of dt_plant

    // The sag metric reads the established residual: samples within
    // sag_settle after fault application are the actuation transient (the
    // first faulted sample is identical for every controller) and are not
    // counted as sag depth.
    double sag_settle = 0.05;  // s

    bool turbine_connected = true;
    std::uint64_t config_hash = 0;
};

// Continuous plant state advanced by the RK4 integrator.  Controller and PLL
// states are discrete and live with the run loop.
struct SimState {
    DriveTrainState drive;
    double i_sd = 0.0;     // generator convention, A
    double i_sq = 0.0;     // generator convention, A
    double theta_e = 0.0;  // rad
    double v_dc = 0.0;     // V
    NetworkState net;
};

// Uniformly sampled run outputs; columns in CSV order.
struct TimeSeries {
    std::vector<double> t;
    std::vector<double> v_pcc_pu;
    std::vector<double> v_dc;
    std::vector<double> p_inj_w;
    std::vector<double> q_inj_var;
    std::vector<double> i_rms_a;
    std::vector<double> w_m_rad_s;
    std::vector<double> t_e_nm;
    std::vector<std::uint8_t> msc_sat;
    std::vector<std::uint8_t> gsc_sat;

    std::size_t size() const { return t.size(); }
};

// Trapezoidal whole-run energy accounting, J.  Closes to integrator accuracy
// for the series-branch fault locations (pcc, remote).
struct EnergyAudit {
    double e_wind = 0.0;         // aerodynamic energy captured by the rotor
    double e_grid = 0.0;         // delivered at the PCC
    double e_stator_loss = 0.0;  // 3/2 R_s i_s^2
    double e_line_loss = 0.0;    // 3/2 R_branch i_g^2
    double e_friction = 0.0;     // B w^2
    double d_kinetic = 0.0;      // change in 1/2 J w^2
    double d_dc = 0.0;           // change in 1/2 C v_dc^2
    double d_magnetic = 0.0;     // change in stored machine + branch energy

    double residual() const {
        return e_wind - e_grid - e_stator_loss - e_line_loss - e_friction - d_kinetic -
               d_dc - d_magnetic;
    }
    // Residual relative to delivered energy.
    double residual_frac() const { return e_grid != 0.0 ? residual() / e_grid : 0.0; }
};

enum class RunStatus { ok, dc_link_collapse, non_finite_state };

struct ScenarioReport {
    double sag_depth_pu = 0.0;     // min v_pcc_pu inside the fault window,
                                   // past the sag_settle actuation transient
    double v_dc_max_dev_pu = 0.0;  // max |v_dc - v_dc_ref| / v_dc_ref
    double p_ss_w = 0.0;           // mean injected power over the final 10%
    double q_peak_var = 0.0;       // max injected reactive power
    double p_prefault_w = 0.0;     // mean p over the 0.2 s before t_on
    double q_prefault_var = 0.0;
    bool fault_enabled = false;
    double fault_t_on = 0.0;
    double fault_t_off = 0.0;
    EnergyAudit energy;
    RunStatus status = RunStatus::ok;
    std::string diagnostic;
    std::uint64_t config_hash = 0;
};

// Per-plant-step instrumentation hook (tests use it to assert the zero-order
// hold and to audit intermediate quantities).
struct StepProbe {
    double t = 0.0;
    const SimState* state = nullptr;
    DqPair v_msc_applied;
    DqPair v_gsc_applied;
    bool ctrl_updated = false;
};
using StepObserver = std::function<void(const StepProbe&)>;

struct RunResult {
    TimeSeries series;
    ScenarioReport report;
    bool ok() const { return report.status == RunStatus::ok; }
};

// Integrates the scenario from 0 to t_end.  Controllers execute every dt_ctrl
// (MSC then GSC, both reading start-of-step measurements); commands are
// realized against the present DC voltage each plant step and held across the
// RK4 stages.  Failed runs keep the partial series and carry a diagnostic.
RunResult run_scenario(const ScenarioConfig& cfg, const StepObserver& observer = {});

// improvement_pct = 100 * (sag_b - sag_s) / sag_b with sag = max(0, 1 - sag_depth_pu).
// Empty when the baseline shows no sag.
std::optional<double> compare_runs(const ScenarioReport& baseline,
                                   const ScenarioReport& supported);

}  // namespace wtsim
