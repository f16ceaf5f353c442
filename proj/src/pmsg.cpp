#include "wtsim/pmsg.hpp"

#include <cmath>
#include <stdexcept>

namespace wtsim {

PmsgParams make_pmsg_params(double r_s, double l_ls, double l_dm, double l_qm,
                            double psi_f, int pole_pairs) {
    PmsgParams p;
    p.r_s = r_s;
    p.l_ls = l_ls;
    p.l_dm = l_dm;
    p.l_qm = l_qm;
    p.l_d = l_ls + l_dm;
    p.l_q = l_ls + l_qm;
    p.psi_f = psi_f;
    p.pole_pairs = pole_pairs;

    if (p.r_s < 0.0)
        throw std::invalid_argument("pmsg: r_s must be >= 0");
    if (p.l_d <= 0.0)
        throw std::invalid_argument("pmsg: l_d must be > 0");
    if (p.l_q <= 0.0)
        throw std::invalid_argument("pmsg: l_q must be > 0");
    if (p.psi_f <= 0.0)
        throw std::invalid_argument("pmsg: psi_f must be > 0");
    if (p.pole_pairs < 1)
        throw std::invalid_argument("pmsg: pole_pairs must be >= 1");
    return p;
}

FluxLinkages flux_linkages(const PmsgParams& p, double i_sd, double i_sq) {
    return FluxLinkages{p.l_d * i_sd + p.psi_f, p.l_q * i_sq};
}

StatorDerivative stator_derivatives(const PmsgParams& p, const PmsgState& s,
                                    double v_sd, double v_sq) {
    StatorDerivative d;
    d.di_sd = (-v_sd - p.r_s * s.i_sd + s.w_e * p.l_q * s.i_sq) / p.l_d;
    d.di_sq = (-v_sq - p.r_s * s.i_sq - s.w_e * p.l_d * s.i_sd + s.w_e * p.psi_f) / p.l_q;
    return d;
}

double electromagnetic_torque(const PmsgParams& p, double i_sd, double i_sq) {
    return 1.5 * p.pole_pairs * (p.psi_f * i_sq + (p.l_d - p.l_q) * i_sd * i_sq);
}

DqVoltage steady_state_voltages(const PmsgParams& p, double i_sd, double i_sq, double w_e) {
    DqVoltage v;
    v.v_sd = -p.r_s * i_sd + w_e * p.l_q * i_sq;
    v.v_sq = -p.r_s * i_sq - w_e * p.l_d * i_sd + w_e * p.psi_f;
    return v;
}

}  // namespace wtsim
