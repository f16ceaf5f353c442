#pragma once

#include "wtsim/transforms.hpp"

namespace wtsim {

// Shared DC link of the back-to-back pair.
struct DcLink {
    double c_dc = 0.0;  // F
    double v_dc = 0.0;  // V
};

enum class VscSide { machine, grid };

// Average-value voltage source converter: the commanded dq voltage is
// realized instantly up to the modulation limit m_max * v_dc / 2
// (m_max <= 1.15 covers the space-vector range).
struct Vsc {
    double m_max = 1.15;
    VscSide side = VscSide::grid;
};

struct RealizedVoltage {
    double d = 0.0;
    double q = 0.0;
    bool saturated = false;
};

// Maximum realizable line-to-neutral peak for the present DC voltage.
double modulation_limit(const Vsc& vsc, double v_dc);

// Identity inside the modulation circle; radial projection onto the boundary
// outside it (magnitude clamped, direction preserved, flag set).
RealizedVoltage realize_voltage(const Vsc& vsc, double v_dc, DqPair cmd);

// Power-balance form of the DC-link dynamics:
//   dv_dc/dt = (p_in - p_out) / (c_dc * v_dc)
// p_in is the machine-side power delivered into the link, p_out the grid-side
// power drawn from it.  The caller enforces the collapse floor on v_dc.
double dc_link_derivative(const DcLink& link, double p_in, double p_out);

// Duty-ratio view of a realized voltage (per half DC link), for inspection.
DqPair duty_ratio(DqPair realized, double v_dc);

}  // namespace wtsim
