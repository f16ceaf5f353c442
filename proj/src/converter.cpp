#include "wtsim/converter.hpp"

#include <cmath>

namespace wtsim {

double modulation_limit(const Vsc& vsc, double v_dc) {
    return vsc.m_max * v_dc * 0.5;
}

RealizedVoltage realize_voltage(const Vsc& vsc, double v_dc, DqPair cmd) {
    const double limit = modulation_limit(vsc, v_dc);
    const double mag = std::hypot(cmd.d, cmd.q);

    RealizedVoltage out;
    if (mag <= limit || mag == 0.0) {
        out.d = cmd.d;
        out.q = cmd.q;
        out.saturated = false;
    } else {
        const double scale = limit / mag;
        out.d = cmd.d * scale;
        out.q = cmd.q * scale;
        out.saturated = true;
    }
    return out;
}

double dc_link_derivative(const DcLink& link, double p_in, double p_out) {
    return (p_in - p_out) / (link.c_dc * link.v_dc);
}

DqPair duty_ratio(DqPair realized, double v_dc) {
    const double half = 0.5 * v_dc;
    return DqPair{realized.d / half, realized.q / half};
}

}  // namespace wtsim
