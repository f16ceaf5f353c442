#pragma once

#include <cmath>

// Reference-frame conventions used by every module in this project.
//
//   * The dq0 transform is amplitude-invariant: a balanced three-phase set of
//     peak amplitude M whose phase-a peak aligns with the frame angle maps to
//     d = M, q = 0, zero = 0.  The 3/2 factor therefore appears explicitly in
//     all power and torque expressions.
//   * The q axis is defined with the -sin projection, i.e. q lags d by 90
//     electrical degrees.  With complex notation x = d + jq, a series RL
//     branch in the rotating frame obeys  v = R i + L di/dt + jw L i.
//   * Machine frame: d axis on the rotor flux, theta_e = pole_pairs * theta_m.
//   * Grid frame: d axis on the Thevenin source phase in "ideal" mode, or on
//     the measured PCC voltage when the SRF-PLL is enabled.
//   * Machine stator currents are stored positive OUT of the machine
//     (generator convention).  Control loops operate on currents measured at
//     the converter terminals, positive toward the machine / toward the grid;
//     see control.hpp.

namespace wtsim {

inline constexpr double two_pi = 6.283185307179586476925286766559;

// Electrical angle wrapped to [0, 2*pi).
struct Angle {
    double rad = 0.0;

    static Angle wrap(double theta) {
        double w = std::fmod(theta, two_pi);
        if (w < 0.0)
            w += two_pi;
        return Angle{w};
    }
};

// Instantaneous three-phase sample (volts or amperes).
struct ThreePhase {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

// Instantaneous rotating-frame sample, same units as its abc source.
struct Dq0 {
    double d = 0.0;
    double q = 0.0;
    double zero = 0.0;
};

// d/q pair without the zero channel, used for converter commands and
// measurements that are balanced by construction.
struct DqPair {
    double d = 0.0;
    double q = 0.0;
};

Dq0 abc_to_dq0(const ThreePhase& x, Angle theta);
ThreePhase dq0_to_abc(const Dq0& x, Angle theta);

// Re-expresses a dq vector in a frame rotated by -dtheta, i.e. multiplies the
// complex vector d + jq by e^{j*dtheta}.  Used to move grid quantities between
// the source-synchronous frame and the PLL frame.
DqPair rotate_dq(DqPair x, double dtheta);

// --- Grid angle acquisition -------------------------------------------------

enum class AngleMode { ideal, pll };

// Synchronous-reference-frame PLL: PI loop filter on the normalized q-axis
// voltage in the PLL's own frame.
struct PllParams {
    double kp = 0.0;     // rad/s per pu q-voltage
    double ki = 0.0;     // rad/s^2 per pu q-voltage
    double w_nom = 0.0;  // nominal grid electrical frequency, rad/s
    double v_nom = 1.0;  // nominal line-to-neutral peak used to normalize
};

struct PllState {
    double theta = 0.0;    // current angle estimate, wrapped
    double w_integ = 0.0;  // integral part of the frequency correction, rad/s
};

// Advances the PLL by dt given the PCC voltage expressed in the
// source-synchronous frame whose angle is theta_source.
void pll_step(PllState& pll, const PllParams& params, DqPair v_pcc_source_frame,
              double theta_source, double dt);

struct AngleSourceSpec {
    AngleMode mode = AngleMode::ideal;
    double w_nom = 0.0;   // rad/s
    double theta0 = 0.0;  // source phase at t = 0
};

// "ideal" returns w_nom*t + theta0 wrapped; "pll" returns the current PLL
// estimate (the owner advances the PLL with pll_step at the controller rate).
Angle grid_angle(double t, const AngleSourceSpec& src, const PllState* pll);

}  // namespace wtsim
