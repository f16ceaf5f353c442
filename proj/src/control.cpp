#include "wtsim/control.hpp"

#include <algorithm>

namespace wtsim {

double pi_step(PiController& c, double error, double dt) {
    if (c.aw == AntiWindup::conditional) {
        const double u_pre = c.kp * error + c.integ;
        const double push = c.ki * error;  // direction the integrator would move
        const bool frozen = (u_pre >= c.out_max && push > 0.0) ||
                            (u_pre <= c.out_min && push < 0.0);
        if (!frozen)
            c.integ = std::clamp(c.integ + c.ki * error * dt, c.out_min, c.out_max);
    } else {
        c.integ += c.ki * error * dt;
    }
    return std::clamp(c.kp * error + c.integ, c.out_min, c.out_max);
}

DqPair msc_control_step(const MscRefs& refs, double w_m, double i_sd, double i_sq,
                        double w_e, const PmsgParams& params, MscLoops& loops, double dt) {
    const double i_sq_ref = pi_step(loops.speed, refs.w_ref - w_m, dt);
    const double v_sd_p = pi_step(loops.i_d, refs.i_sd_ref - i_sd, dt);
    const double v_sq_p = pi_step(loops.i_q, i_sq_ref - i_sq, dt);

    DqPair cmd{v_sd_p, v_sq_p};
    if (loops.feedforward) {
        cmd.d += -w_e * params.l_q * i_sq;
        cmd.q += w_e * params.l_d * i_sd + w_e * params.psi_f;
    }
    return cmd;
}

DqPair gsc_control_step(const GscRefs& refs, double v_dc, double i_d, double i_q,
                        DqPair v_pcc, double q_meas, double w_s, double l_f,
                        GscLoops& loops, double dt) {
    const double i_d_ref = pi_step(loops.v_dc, refs.v_dc_ref - v_dc, dt);
    const double i_q_ref = pi_step(loops.q, refs.q_ref - q_meas, dt);
    const double v_d_p = pi_step(loops.i_d, i_d_ref - i_d, dt);
    const double v_q_p = pi_step(loops.i_q, i_q_ref - i_q, dt);

    DqPair cmd{v_d_p, v_q_p};
    if (loops.feedforward) {
        cmd.d += -w_s * l_f * i_q + v_pcc.d;
        cmd.q += w_s * l_f * i_d + v_pcc.q;
    }
    return cmd;
}

double q_ref_from_droop(const DroopParams& droop, double v_pcc_pu) {
    const double raw = droop.k_q * (droop.v_pcc_ref - v_pcc_pu);
    return std::clamp(raw, droop.q_min, droop.q_max);
}

}  // namespace wtsim
