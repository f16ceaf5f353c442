#include "wtsim/sim.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "wtsim/rk4.hpp"

namespace wtsim {

namespace {

constexpr double k_sqrt2 = 1.4142135623730950488;

// Thrown out of the derivative evaluation when a component goes non-finite.
struct SimAbort {
    std::string diagnostic;
};

// Continuous state layout for the integrator.
enum StateIndex : std::size_t {
    s_w_m = 0,
    s_theta_m,
    s_i_sd,
    s_i_sq,
    s_theta_e,
    s_v_dc,
    s_i_gd,
    s_i_gq,
    state_count
};

constexpr const char* state_name[state_count] = {
    "w_m", "theta_m", "i_sd", "i_sq", "theta_e", "v_dc", "i_gd", "i_gq"};

using StateVec = std::array<double, state_count>;

StateVec pack(const SimState& s) {
    return {s.drive.w_m, s.drive.theta_m, s.i_sd, s.i_sq, s.theta_e, s.v_dc,
            s.net.i_d, s.net.i_q};
}

SimState unpack(const StateVec& x) {
    SimState s;
    s.drive.w_m = x[s_w_m];
    s.drive.theta_m = x[s_theta_m];
    s.i_sd = x[s_i_sd];
    s.i_sq = x[s_i_sq];
    s.theta_e = x[s_theta_e];
    s.v_dc = x[s_v_dc];
    s.net.i_d = x[s_i_gd];
    s.net.i_q = x[s_i_gq];
    return s;
}

PiController make_pi(const PiGains& g) {
    PiController c;
    c.kp = g.kp;
    c.ki = g.ki;
    c.out_min = g.out_min;
    c.out_max = g.out_max;
    c.aw = AntiWindup::conditional;
    return c;
}

double clamp_to(const PiGains& g, double v) {
    return std::clamp(v, g.out_min, g.out_max);
}

struct Controllers {
    MscLoops msc;
    GscLoops gsc;
    PllState pll;
    PllParams pll_params;
    DqPair msc_cmd;      // stator voltage command, machine dq frame
    DqPair gsc_cmd;      // converter voltage command, source dq frame
    DqPair v_pcc_filt;   // low-passed PCC voltage (source frame)
    double vff_alpha = 1.0;
};

double speed_reference(const ScenarioConfig& cfg, double t) {
    if (cfg.ctrl.w_ref_mode == SpeedRefMode::mppt)
        return cfg.turbine.lambda_opt * cfg.wind.at(t) / cfg.turbine.radius;
    return cfg.ctrl.w_rated;
}

// The decoupling terms cover the series inductance between the converter and
// the measured PCC voltage; the dynamic branch may extend past the PCC for
// remote faults.
double decouple_inductance(const ScenarioConfig& cfg) {
    if (cfg.ctrl.l_decouple > 0.0)
        return cfg.ctrl.l_decouple;
    return cfg.grid.l_f + cfg.grid.l_tr;
}

// Steady operating point used to start runs at (approximate) equilibrium:
// machine side solved exactly, grid current by fixed-point iteration on the
// PCC node equation.
struct InitPoint {
    double w_m = 0.0;
    double i_sd = 0.0;  // generator convention
    double i_sq = 0.0;
    DqVoltage v_s;
    double p_export = 0.0;
    DqPair i_g;
    PccMeasurement pcc;
    DqPair v_conv;
};

InitPoint solve_init(const ScenarioConfig& cfg) {
    InitPoint ip;
    ip.w_m = speed_reference(cfg, 0.0);
    const double v_wind = cfg.wind.at(0.0);
    const double t_aero = aero_torque(cfg.turbine, v_wind, ip.w_m);
    const double t_e = t_aero - cfg.mech.friction * ip.w_m;
    ip.i_sd = -cfg.ctrl.i_sd_ref;
    // Torque inversion ignores the saliency term (zero at i_sd_ref = 0 and for
    // non-salient machines); the speed loop trims any residual.
    ip.i_sq = t_e / (1.5 * cfg.pmsg.pole_pairs * cfg.pmsg.psi_f);
    const double w_e = cfg.pmsg.pole_pairs * ip.w_m;
    ip.v_s = steady_state_voltages(cfg.pmsg, ip.i_sd, ip.i_sq, w_e);
    ip.p_export = 1.5 * (ip.v_s.v_sd * ip.i_sd + ip.v_s.v_sq * ip.i_sq);

    using Cx = std::complex<double>;
    const double w_s = cfg.grid.w_nom();
    Cx current{ip.p_export / (1.5 * cfg.grid.v_nom), 0.0};
    PccMeasurement pcc;
    for (int k = 0; k < 60; ++k) {
        NetworkState ns{current.real(), current.imag()};
        pcc = solve_pcc(cfg.grid, cfg.fault, ns, false);
        double q_target = cfg.ctrl.q_ref_const;
        if (cfg.ctrl.q_ref_mode == QRefMode::droop)
            q_target = q_ref_from_droop(cfg.ctrl.droop, pcc.v_pu);
        const Cx v{pcc.v_d, pcc.v_q};
        if (std::abs(v) < 1e-9)
            break;
        const Cx s_target{ip.p_export, q_target};
        const Cx next = std::conj(s_target / (1.5 * v));
        if (std::abs(next - current) < 1e-10 * (1.0 + std::abs(next))) {
            current = next;
            break;
        }
        current = next;
    }
    NetworkState ns{current.real(), current.imag()};
    ip.pcc = solve_pcc(cfg.grid, cfg.fault, ns, false);
    ip.i_g = DqPair{current.real(), current.imag()};

    // steady KVL from the converter terminals to the PCC
    const Cx z_to_pcc{cfg.grid.r_f + cfg.grid.r_tr,
                      w_s * (cfg.grid.l_f + cfg.grid.l_tr)};
    const Cx v_conv = Cx{ip.pcc.v_d, ip.pcc.v_q} + z_to_pcc * current;
    ip.v_conv = DqPair{v_conv.real(), v_conv.imag()};
    return ip;
}

Controllers make_controllers(const ScenarioConfig& cfg, const InitPoint& ip) {
    Controllers c;
    c.msc.speed = make_pi(cfg.ctrl.speed);
    c.msc.i_d = make_pi(cfg.ctrl.msc_id);
    c.msc.i_q = make_pi(cfg.ctrl.msc_iq);
    c.msc.feedforward = cfg.ctrl.msc_feedforward;
    c.gsc.v_dc = make_pi(cfg.ctrl.vdc);
    c.gsc.q = make_pi(cfg.ctrl.q);
    c.gsc.i_d = make_pi(cfg.ctrl.gsc_id);
    c.gsc.i_q = make_pi(cfg.ctrl.gsc_iq);
    c.gsc.feedforward = cfg.ctrl.gsc_feedforward;

    // Preload integrators with the steady outputs so the run starts with
    // continuous commands; loops only have to trim from there.
    c.msc.speed.integ = clamp_to(cfg.ctrl.speed, -ip.i_sq);
    c.msc.i_d.integ = clamp_to(cfg.ctrl.msc_id, -cfg.pmsg.r_s * (-ip.i_sd));
    c.msc.i_q.integ = clamp_to(cfg.ctrl.msc_iq, cfg.pmsg.r_s * ip.i_sq);
    if (!c.msc.feedforward) {
        const double w_e = cfg.pmsg.pole_pairs * ip.w_m;
        c.msc.i_d.integ = clamp_to(cfg.ctrl.msc_id, c.msc.i_d.integ - w_e * cfg.pmsg.l_q * (-ip.i_sq));
        c.msc.i_q.integ = clamp_to(cfg.ctrl.msc_iq, c.msc.i_q.integ + w_e * cfg.pmsg.l_d * (-ip.i_sd) + w_e * cfg.pmsg.psi_f);
    }

    c.gsc.v_dc.integ = clamp_to(cfg.ctrl.vdc, ip.i_g.d);
    c.gsc.q.integ = clamp_to(cfg.ctrl.q, ip.i_g.q);
    const double w_s = cfg.grid.w_nom();
    const double l_dec = decouple_inductance(cfg);
    if (cfg.ctrl.gsc_feedforward) {
        c.gsc.i_d.integ =
            clamp_to(cfg.ctrl.gsc_id, ip.v_conv.d - ip.pcc.v_d + w_s * l_dec * ip.i_g.q);
        c.gsc.i_q.integ =
            clamp_to(cfg.ctrl.gsc_iq, ip.v_conv.q - ip.pcc.v_q - w_s * l_dec * ip.i_g.d);
    } else {
        c.gsc.i_d.integ = clamp_to(cfg.ctrl.gsc_id, ip.v_conv.d);
        c.gsc.i_q.integ = clamp_to(cfg.ctrl.gsc_iq, ip.v_conv.q);
    }

    c.pll_params = PllParams{cfg.ctrl.pll_kp, cfg.ctrl.pll_ki, cfg.grid.w_nom(),
                             cfg.grid.v_nom};
    c.pll.theta = Angle::wrap(cfg.ctrl.theta0).rad;
    c.pll.w_integ = 0.0;

    c.v_pcc_filt = DqPair{ip.pcc.v_d, ip.pcc.v_q};
    c.vff_alpha = cfg.dt_ctrl / (cfg.ctrl.vff_tau + cfg.dt_ctrl);

    c.msc_cmd = DqPair{ip.v_s.v_sd, ip.v_s.v_sq};
    c.gsc_cmd = ip.v_conv;
    return c;
}

void update_controllers(const ScenarioConfig& cfg, Controllers& c, const SimState& s,
                        double t) {
    const double w_s = cfg.grid.w_nom();
    const double dt = cfg.dt_ctrl;
    const bool on_fault = fault_active(cfg.fault, t);
    const PccMeasurement pcc = solve_pcc(cfg.grid, cfg.fault, s.net, on_fault);
    const double theta_src = w_s * t + cfg.ctrl.theta0;

    // Machine side first; loop currents in the converter convention.
    MscRefs mrefs{speed_reference(cfg, t), cfg.ctrl.i_sd_ref};
    const double w_e = cfg.pmsg.pole_pairs * s.drive.w_m;
    c.msc_cmd = msc_control_step(mrefs, s.drive.w_m, -s.i_sd, -s.i_sq, w_e, cfg.pmsg,
                                 c.msc, dt);

    // Grid side; measurements rotated into the control frame when the PLL
    // supplies the angle.  The feedforward and the droop read the filtered
    // PCC voltage (see ControlConfig::vff_tau).
    c.v_pcc_filt.d += c.vff_alpha * (pcc.v_d - c.v_pcc_filt.d);
    c.v_pcc_filt.q += c.vff_alpha * (pcc.v_q - c.v_pcc_filt.q);

    double frame_shift = 0.0;
    if (cfg.ctrl.angle_mode == AngleMode::pll) {
        pll_step(c.pll, c.pll_params, DqPair{pcc.v_d, pcc.v_q}, theta_src, dt);
        frame_shift = c.pll.theta - theta_src;
    }
    const DqPair i_ctrl = rotate_dq(DqPair{s.net.i_d, s.net.i_q}, -frame_shift);
    const DqPair v_pcc_ctrl = rotate_dq(c.v_pcc_filt, -frame_shift);

    double q_ref = cfg.ctrl.q_ref_const;
    if (cfg.ctrl.q_ref_mode == QRefMode::droop)
        q_ref = q_ref_from_droop(cfg.ctrl.droop,
                                 std::hypot(c.v_pcc_filt.d, c.v_pcc_filt.q) / cfg.grid.v_nom);

    GscRefs grefs{cfg.ctrl.v_dc_ref, q_ref};
    const DqPair cmd_ctrl = gsc_control_step(grefs, s.v_dc, i_ctrl.d, i_ctrl.q,
                                             v_pcc_ctrl, pcc.q, w_s,
                                             decouple_inductance(cfg), c.gsc, dt);
    c.gsc_cmd = rotate_dq(cmd_ctrl, frame_shift);
}

// Instantaneous boundary powers for the trapezoidal energy audit.
struct BoundaryPowers {
    double p_aero = 0.0;
    double p_grid = 0.0;
    double p_stator_loss = 0.0;
    double p_line_loss = 0.0;
    double p_friction = 0.0;
};

BoundaryPowers boundary_powers(const ScenarioConfig& cfg, const SimState& s, double t) {
    BoundaryPowers bp;
    const double v_wind = cfg.wind.at(t);
    bp.p_aero = aero_torque(cfg.turbine, v_wind, s.drive.w_m) * s.drive.w_m;
    const PccMeasurement pcc =
        solve_pcc(cfg.grid, cfg.fault, s.net, fault_active(cfg.fault, t));
    bp.p_grid = pcc.p;
    bp.p_stator_loss = 1.5 * cfg.pmsg.r_s * (s.i_sd * s.i_sd + s.i_sq * s.i_sq);
    // resistive loss between the converter and the PCC measurement plane
    const double r_to_pcc = cfg.fault.location == FaultLocation::filter_bus
                                ? cfg.grid.r_f
                                : cfg.grid.r_f + cfg.grid.r_tr;
    bp.p_line_loss = 1.5 * r_to_pcc * (s.net.i_d * s.net.i_d + s.net.i_q * s.net.i_q);
    bp.p_friction = cfg.mech.friction * s.drive.w_m * s.drive.w_m;
    return bp;
}

double stored_magnetic(const ScenarioConfig& cfg, const SimState& s) {
    const BranchImpedance b = converter_branch(cfg.grid, cfg.fault);
    return 1.5 * (0.5 * cfg.pmsg.l_d * s.i_sd * s.i_sd + 0.5 * cfg.pmsg.l_q * s.i_sq * s.i_sq) +
           1.5 * 0.5 * b.l * (s.net.i_d * s.net.i_d + s.net.i_q * s.net.i_q);
}

struct MetricsAccumulator {
    double sag_min = 1.5;
    bool sag_seen = false;
    double v_dc_dev_max = 0.0;
    double q_peak = -1e300;
    double p_tail_sum = 0.0;
    std::size_t p_tail_n = 0;
    double p_pre_sum = 0.0;
    std::size_t p_pre_n = 0;
    double q_pre_sum = 0.0;
};

void finalize_report(const ScenarioConfig& cfg, const MetricsAccumulator& acc,
                     ScenarioReport& rep) {
    rep.sag_depth_pu = acc.sag_seen ? acc.sag_min : 0.0;
    rep.v_dc_max_dev_pu = acc.v_dc_dev_max;
    rep.q_peak_var = acc.q_peak == -1e300 ? 0.0 : acc.q_peak;
    rep.p_ss_w = acc.p_tail_n ? acc.p_tail_sum / acc.p_tail_n : 0.0;
    rep.p_prefault_w = acc.p_pre_n ? acc.p_pre_sum / acc.p_pre_n : 0.0;
    rep.q_prefault_var = acc.p_pre_n ? acc.q_pre_sum / acc.p_pre_n : 0.0;
    rep.fault_enabled = cfg.fault.enabled;
    rep.fault_t_on = cfg.fault.t_on;
    rep.fault_t_off = cfg.fault.t_off;
    rep.config_hash = cfg.config_hash;
}

void accumulate_metrics(const ScenarioConfig& cfg, MetricsAccumulator& acc, double t,
                        double v_pu, double v_dc, double p, double q) {
    const bool in_window =
        cfg.fault.enabled
            ? (t >= cfg.fault.t_on + cfg.sag_settle && t < cfg.fault.t_off)
            : true;
    if (in_window) {
        acc.sag_min = acc.sag_seen ? std::min(acc.sag_min, v_pu) : v_pu;
        acc.sag_seen = true;
    }
    if (cfg.ctrl.v_dc_ref > 0.0)
        acc.v_dc_dev_max = std::max(acc.v_dc_dev_max,
                                    std::abs(v_dc - cfg.ctrl.v_dc_ref) / cfg.ctrl.v_dc_ref);
    acc.q_peak = std::max(acc.q_peak, q);
    if (t >= 0.9 * cfg.t_end) {
        acc.p_tail_sum += p;
        ++acc.p_tail_n;
    }
    if (cfg.fault.enabled && t < cfg.fault.t_on && t >= cfg.fault.t_on - 0.2) {
        acc.p_pre_sum += p;
        acc.q_pre_sum += q;
        ++acc.p_pre_n;
    }
}

// Baseline runs without the turbine: the network carries no converter current,
// so the PCC follows the algebraic node solve directly.
RunResult run_disconnected(const ScenarioConfig& cfg) {
    RunResult out;
    MetricsAccumulator acc;
    const std::size_t n_samples =
        static_cast<std::size_t>(std::llround(cfg.t_end / cfg.sample_dt)) + 1;
    const NetworkState zero{};
    for (std::size_t k = 0; k < n_samples; ++k) {
        const double t = static_cast<double>(k) * cfg.sample_dt;
        const PccMeasurement pcc =
            solve_pcc(cfg.grid, cfg.fault, zero, fault_active(cfg.fault, t));
        out.series.t.push_back(t);
        out.series.v_pcc_pu.push_back(pcc.v_pu);
        out.series.v_dc.push_back(0.0);
        out.series.p_inj_w.push_back(0.0);
        out.series.q_inj_var.push_back(0.0);
        out.series.i_rms_a.push_back(0.0);
        out.series.w_m_rad_s.push_back(0.0);
        out.series.t_e_nm.push_back(0.0);
        out.series.msc_sat.push_back(0);
        out.series.gsc_sat.push_back(0);
        accumulate_metrics(cfg, acc, t, pcc.v_pu, cfg.ctrl.v_dc_ref, 0.0, 0.0);
    }
    finalize_report(cfg, acc, out.report);
    out.report.status = RunStatus::ok;
    return out;
}

}  // namespace

RunResult run_scenario(const ScenarioConfig& cfg, const StepObserver& observer) {
    if (!cfg.turbine_connected)
        return run_disconnected(cfg);

    RunResult out;
    MetricsAccumulator acc;

    const std::size_t n_steps =
        static_cast<std::size_t>(std::llround(cfg.t_end / cfg.dt_plant));
    const std::size_t ctrl_every =
        static_cast<std::size_t>(std::llround(cfg.dt_ctrl / cfg.dt_plant));
    const std::size_t sample_every =
        static_cast<std::size_t>(std::llround(cfg.sample_dt / cfg.dt_plant));

    const InitPoint ip = solve_init(cfg);
    Controllers ctl = make_controllers(cfg, ip);

    SimState state;
    state.drive.w_m = ip.w_m;
    state.drive.theta_m = 0.0;
    state.i_sd = ip.i_sd;
    state.i_sq = ip.i_sq;
    state.theta_e = 0.0;
    state.v_dc = cfg.converter.v_dc_init > 0.0 ? cfg.converter.v_dc_init : cfg.ctrl.v_dc_ref;
    state.net = NetworkState{ip.i_g.d, ip.i_g.q};

    const Vsc vsc_machine{cfg.converter.m_max, VscSide::machine};
    const Vsc vsc_grid{cfg.converter.m_max, VscSide::grid};
    const double w_s = cfg.grid.w_nom();
    const double v_dc_floor = cfg.converter.v_dc_floor_frac * cfg.ctrl.v_dc_ref;

    DqPair v_msc_applied{};
    DqPair v_gsc_applied{};
    bool msc_sat = false;
    bool gsc_sat = false;
    // held constant across each plant step so the RK4 stages never straddle
    // a switching instant or a wind step
    bool fault_on = false;
    double v_wind = cfg.wind.at(0.0);

    EnergyAudit audit;
    BoundaryPowers prev_bp = boundary_powers(cfg, state, 0.0);
    const double ke0 = 0.5 * cfg.mech.inertia * state.drive.w_m * state.drive.w_m;
    const double edc0 = 0.5 * cfg.converter.c_dc * state.v_dc * state.v_dc;
    const double emag0 = stored_magnetic(cfg, state);

    // Derivative of the coupled plant with the realized converter voltages
    // held over the step.
    const auto plant_deriv = [&](const StateVec& x, double t_stage) -> StateVec {
        const SimState s = unpack(x);
        const double t_aero = aero_torque(cfg.turbine, v_wind, s.drive.w_m);
        const double t_e = electromagnetic_torque(cfg.pmsg, s.i_sd, s.i_sq);
        const DriveTrainDerivative dtr =
            drive_train_derivative(s.drive, t_aero, t_e, cfg.mech);

        PmsgState ps{s.i_sd, s.i_sq, s.theta_e, cfg.pmsg.pole_pairs * s.drive.w_m};
        const StatorDerivative sd =
            stator_derivatives(cfg.pmsg, ps, v_msc_applied.d, v_msc_applied.q);

        const double p_in = 1.5 * (v_msc_applied.d * s.i_sd + v_msc_applied.q * s.i_sq);
        const double p_out = 1.5 * (v_gsc_applied.d * s.net.i_d + v_gsc_applied.q * s.net.i_q);
        const double dv_dc =
            dc_link_derivative(DcLink{cfg.converter.c_dc, s.v_dc}, p_in, p_out);

        const NetworkDerivative nd = network_derivative(
            cfg.grid, cfg.fault, s.net, v_gsc_applied, fault_on, w_s);

        const StateVec dx = {dtr.dw_m,  dtr.dtheta_m, sd.di_sd, sd.di_sq,
                             ps.w_e,    dv_dc,        nd.di_d,  nd.di_q};
        for (std::size_t i = 0; i < state_count; ++i) {
            if (!std::isfinite(dx[i]))
                throw SimAbort{std::string("non-finite derivative of ") + state_name[i] +
                               " at t=" + std::to_string(t_stage)};
        }
        return dx;
    };

    const auto sample_row = [&](double t) {
        const PccMeasurement pcc =
            solve_pcc(cfg.grid, cfg.fault, state.net, fault_active(cfg.fault, t));
        out.series.t.push_back(t);
        out.series.v_pcc_pu.push_back(pcc.v_pu);
        out.series.v_dc.push_back(state.v_dc);
        out.series.p_inj_w.push_back(pcc.p);
        out.series.q_inj_var.push_back(pcc.q);
        out.series.i_rms_a.push_back(std::hypot(state.net.i_d, state.net.i_q) / k_sqrt2);
        out.series.w_m_rad_s.push_back(state.drive.w_m);
        out.series.t_e_nm.push_back(electromagnetic_torque(cfg.pmsg, state.i_sd, state.i_sq));
        out.series.msc_sat.push_back(msc_sat ? 1 : 0);
        out.series.gsc_sat.push_back(gsc_sat ? 1 : 0);
        accumulate_metrics(cfg, acc, t, pcc.v_pu, state.v_dc, pcc.p, pcc.q);
    };

    out.report.status = RunStatus::ok;
    try {
        for (std::size_t i = 0; i <= n_steps; ++i) {
            const double t = static_cast<double>(i) * cfg.dt_plant;
            fault_on = fault_active(cfg.fault, t);
            v_wind = cfg.wind.at(t);

            bool ctrl_updated = false;
            if (i % ctrl_every == 0 && i < n_steps) {
                update_controllers(cfg, ctl, state, t);
                ctrl_updated = true;
            }

            // Realize commands against the present DC voltage; held across
            // the RK4 stages of this step.
            const RealizedVoltage vm = realize_voltage(vsc_machine, state.v_dc, ctl.msc_cmd);
            const RealizedVoltage vg = realize_voltage(vsc_grid, state.v_dc, ctl.gsc_cmd);
            v_msc_applied = DqPair{vm.d, vm.q};
            v_gsc_applied = DqPair{vg.d, vg.q};
            msc_sat = vm.saturated;
            gsc_sat = vg.saturated;

            if (i % sample_every == 0)
                sample_row(t);

            if (observer)
                observer(StepProbe{t, &state, v_msc_applied, v_gsc_applied, ctrl_updated});

            if (i == n_steps)
                break;

            StateVec x = pack(state);
            x = rk4_step(x, t, cfg.dt_plant, plant_deriv);
            state = unpack(x);
            state.drive.theta_m = Angle::wrap(state.drive.theta_m).rad;
            state.theta_e = Angle::wrap(state.theta_e).rad;

            for (std::size_t k = 0; k < state_count; ++k) {
                if (!std::isfinite(x[k]) &&
                    (k == s_w_m || k == s_i_sd || k == s_i_sq || k == s_v_dc ||
                     k == s_i_gd || k == s_i_gq))
                    throw SimAbort{std::string("non-finite state ") + state_name[k] +
                                   " at t=" + std::to_string(t + cfg.dt_plant)};
            }

            const double t_next = static_cast<double>(i + 1) * cfg.dt_plant;
            const BoundaryPowers bp = boundary_powers(cfg, state, t_next);
            const double h = 0.5 * cfg.dt_plant;
            audit.e_wind += h * (prev_bp.p_aero + bp.p_aero);
            audit.e_grid += h * (prev_bp.p_grid + bp.p_grid);
            audit.e_stator_loss += h * (prev_bp.p_stator_loss + bp.p_stator_loss);
            audit.e_line_loss += h * (prev_bp.p_line_loss + bp.p_line_loss);
            audit.e_friction += h * (prev_bp.p_friction + bp.p_friction);
            prev_bp = bp;

            if (state.v_dc <= v_dc_floor)
                throw SimAbort{"DC link collapsed (v_dc <= floor) at t=" +
                               std::to_string(t_next)};
        }
    } catch (const SimAbort& abort) {
        out.report.status = abort.diagnostic.find("DC link") != std::string::npos
                                ? RunStatus::dc_link_collapse
                                : RunStatus::non_finite_state;
        out.report.diagnostic = abort.diagnostic;
    }

    audit.d_kinetic = 0.5 * cfg.mech.inertia * state.drive.w_m * state.drive.w_m - ke0;
    audit.d_dc = 0.5 * cfg.converter.c_dc * state.v_dc * state.v_dc - edc0;
    audit.d_magnetic = stored_magnetic(cfg, state) - emag0;
    out.report.energy = audit;
    finalize_report(cfg, acc, out.report);
    return out;
}

std::optional<double> compare_runs(const ScenarioReport& baseline,
                                   const ScenarioReport& supported) {
    const double sag_b = std::max(0.0, 1.0 - baseline.sag_depth_pu);
    const double sag_s = std::max(0.0, 1.0 - supported.sag_depth_pu);
    if (sag_b == 0.0)
        return std::nullopt;
    return 100.0 * (sag_b - sag_s) / sag_b;
}

}  // namespace wtsim
