#pragma once

#include <string>

#include "wtsim/sim.hpp"

namespace wtsim {

// Fixed column order:
//   t, v_pcc_pu, v_dc, p_inj_w, q_inj_var, i_rms_a, w_m_rad_s, t_e_nm,
//   msc_sat, gsc_sat
// Values are written with 17 significant digits so re-parsing reproduces the
// doubles exactly.  Throws std::runtime_error on I/O problems.
void write_timeseries_csv(const TimeSeries& ts, const std::string& path);

TimeSeries read_timeseries_csv(const std::string& path);

}  // namespace wtsim
