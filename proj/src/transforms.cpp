#include "wtsim/transforms.hpp"

namespace wtsim {

namespace {
constexpr double k_two_thirds = 2.0 / 3.0;
constexpr double k_third = 1.0 / 3.0;
constexpr double k_rad_120 = two_pi / 3.0;
}  // namespace

Dq0 abc_to_dq0(const ThreePhase& x, Angle theta) {
    const double ca = std::cos(theta.rad);
    const double cb = std::cos(theta.rad - k_rad_120);
    const double cc = std::cos(theta.rad + k_rad_120);
    const double sa = std::sin(theta.rad);
    const double sb = std::sin(theta.rad - k_rad_120);
    const double sc = std::sin(theta.rad + k_rad_120);

    Dq0 out;
    out.d = k_two_thirds * (x.a * ca + x.b * cb + x.c * cc);
    out.q = -k_two_thirds * (x.a * sa + x.b * sb + x.c * sc);
    out.zero = k_third * (x.a + x.b + x.c);
    return out;
}

ThreePhase dq0_to_abc(const Dq0& x, Angle theta) {
    const double ca = std::cos(theta.rad);
    const double cb = std::cos(theta.rad - k_rad_120);
    const double cc = std::cos(theta.rad + k_rad_120);
    const double sa = std::sin(theta.rad);
    const double sb = std::sin(theta.rad - k_rad_120);
    const double sc = std::sin(theta.rad + k_rad_120);

    ThreePhase out;
    out.a = x.d * ca - x.q * sa + x.zero;
    out.b = x.d * cb - x.q * sb + x.zero;
    out.c = x.d * cc - x.q * sc + x.zero;
    return out;
}

DqPair rotate_dq(DqPair x, double dtheta) {
    const double c = std::cos(dtheta);
    const double s = std::sin(dtheta);
    return DqPair{x.d * c - x.q * s, x.d * s + x.q * c};
}

void pll_step(PllState& pll, const PllParams& params, DqPair v_pcc_source_frame,
              double theta_source, double dt) {
    // Express the measured voltage in the PLL's own frame; the q component is
    // the phase error signal (positive when the PLL lags the voltage vector).
    const DqPair v_pll = rotate_dq(v_pcc_source_frame, theta_source - pll.theta);
    const double err = v_pll.q / params.v_nom;

    pll.w_integ += params.ki * err * dt;
    const double w = params.w_nom + params.kp * err + pll.w_integ;
    pll.theta = Angle::wrap(pll.theta + w * dt).rad;
}

Angle grid_angle(double t, const AngleSourceSpec& src, const PllState* pll) {
    if (src.mode == AngleMode::pll && pll != nullptr)
        return Angle::wrap(pll->theta);
    return Angle::wrap(src.w_nom * t + src.theta0);
}

}  // namespace wtsim
