#pragma once

#include "wtsim/pmsg.hpp"
#include "wtsim/transforms.hpp"

// Cascaded vector control for the two converters.
//
// Loop currents are measured at the converter AC terminals, positive toward
// the load: toward the machine on the MSC (the negative of the generator
// convention stored in PmsgState) and toward the grid on the GSC (same
// direction as NetworkState).  Under that convention the decoupling terms
// below cancel the plant cross-coupling exactly and every loop closes with
// the gain sign implied by its plant: inner current loops and the speed loop
// take positive gains, while the DC-link and reactive-power loops take
// negative gains (raising exported d current lowers v_dc, raising i_q lowers
// injected Q).

namespace wtsim {

enum class AntiWindup {
    conditional,  // freeze on boundary, integrator clamped to output limits
    none,         // output clamped only
};

struct PiController {
    double kp = 0.0;
    double ki = 0.0;  // 1/s
    double integ = 0.0;
    double out_min = 0.0;
    double out_max = 0.0;
    AntiWindup aw = AntiWindup::conditional;
};

// One sample of the discrete PI: integ accumulates ki*error*dt unless the
// output sits at a limit and the error drives it further in; the integrator
// itself never leaves [out_min, out_max].  Returns clamp(kp*error + integ).
double pi_step(PiController& c, double error, double dt);

// --- Machine-side converter --------------------------------------------------

struct MscRefs {
    double w_ref = 0.0;     // mechanical speed reference, rad/s
    double i_sd_ref = 0.0;  // d-axis current reference, A (converter convention)
};

struct MscLoops {
    PiController speed;  // w error -> i_sq reference
    PiController i_d;    // i_sd error -> v_sd'
    PiController i_q;    // i_sq error -> v_sq'
    bool feedforward = true;
};

// Speed loop feeding the q current loop, d loop on i_sd_ref, then decoupling:
//   v_sd* = v_sd' - w_e L_q i_sq
//   v_sq* = v_sq' + w_e L_d i_sd + w_e psi_f
DqPair msc_control_step(const MscRefs& refs, double w_m, double i_sd, double i_sq,
                        double w_e, const PmsgParams& params, MscLoops& loops, double dt);

// --- Grid-side converter -----------------------------------------------------

struct GscRefs {
    double v_dc_ref = 0.0;  // V
    double q_ref = 0.0;     // var
};

struct GscLoops {
    PiController v_dc;  // v_dc error -> i_d reference
    PiController q;     // Q error -> i_q reference
    PiController i_d;   // i_d error -> v_d'
    PiController i_q;   // i_q error -> v_q'
    bool feedforward = true;
};

// DC-link loop feeding the d current loop, Q loop feeding the q current loop,
// then decoupling with the measured PCC voltage vector:
//   v_dl* = v_d' - w_s L_f i_q + v_pcc_d
//   v_ql* = v_q' + w_s L_f i_d + v_pcc_q
// (v_pcc_q vanishes in a PCC-aligned frame; feeding the full vector keeps the
// loops decoupled on weak grids where the frame cannot stay aligned.)
DqPair gsc_control_step(const GscRefs& refs, double v_dc, double i_d, double i_q,
                        DqPair v_pcc, double q_meas, double w_s, double l_f,
                        GscLoops& loops, double dt);

// --- Reactive power reference ------------------------------------------------

struct DroopParams {
    double v_pcc_ref = 1.0;  // pu voltage target
    double k_q = 0.0;        // var per pu-volt deficit
    double q_min = 0.0;      // var
    double q_max = 0.0;      // var
};

// q_ref = clamp(k_q * (v_pcc_ref - v_pcc_pu), q_min, q_max)
double q_ref_from_droop(const DroopParams& droop, double v_pcc_pu);

}  // namespace wtsim
