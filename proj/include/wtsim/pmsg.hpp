#pragma once

namespace wtsim {

// Permanent-magnet synchronous generator in the rotor-flux-aligned dq frame.
// Stator currents are positive OUT of the machine (generator convention), so
// the dynamics read
//   L_d di_sd/dt = -v_sd - R_s i_sd + w_e L_q i_sq
//   L_q di_sq/dt = -v_sq - R_s i_sq - w_e L_d i_sd + w_e psi_f
struct PmsgParams {
    double r_s = 0.0;    // stator resistance, ohm
    double l_ls = 0.0;   // leakage inductance, H
    double l_dm = 0.0;   // d-axis mutual inductance, H
    double l_qm = 0.0;   // q-axis mutual inductance, H
    double l_d = 0.0;    // total d inductance = l_ls + l_dm, H
    double l_q = 0.0;    // total q inductance = l_ls + l_qm, H
    double psi_f = 0.0;  // rotor PM flux linkage, Wb
    int pole_pairs = 0;
};

// Validates invariants (l_d = l_ls + l_dm, l_q = l_ls + l_qm, positivity) and
// returns the checked parameter set.  Throws std::invalid_argument.
PmsgParams make_pmsg_params(double r_s, double l_ls, double l_dm, double l_qm,
                            double psi_f, int pole_pairs);

struct PmsgState {
    double i_sd = 0.0;     // A, positive exporting
    double i_sq = 0.0;     // A, positive exporting
    double theta_e = 0.0;  // electrical angle, rad
    double w_e = 0.0;      // electrical speed = pole_pairs * w_m, rad/s
};

struct FluxLinkages {
    double psi_sd = 0.0;  // Wb
    double psi_sq = 0.0;  // Wb
};

// psi_sd = L_d i_sd + psi_f,  psi_sq = L_q i_sq  (rotor-flux-aligned frame).
FluxLinkages flux_linkages(const PmsgParams& p, double i_sd, double i_sq);

struct StatorDerivative {
    double di_sd = 0.0;  // A/s
    double di_sq = 0.0;  // A/s
};

StatorDerivative stator_derivatives(const PmsgParams& p, const PmsgState& s,
                                    double v_sd, double v_sq);

// T_e = (3/2) p (psi_f i_sq + (L_d - L_q) i_sd i_sq); positive values brake
// the rotor.  Matches the amplitude-invariant transform scaling.
double electromagnetic_torque(const PmsgParams& p, double i_sd, double i_sq);

struct DqVoltage {
    double v_sd = 0.0;
    double v_sq = 0.0;
};

// The unique terminal voltage for which stator_derivatives vanishes:
//   v_sd = -R_s i_sd + w_e L_q i_sq
//   v_sq = -R_s i_sq - w_e L_d i_sd + w_e psi_f
DqVoltage steady_state_voltages(const PmsgParams& p, double i_sd, double i_sq, double w_e);

}  // namespace wtsim
