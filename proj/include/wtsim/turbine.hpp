#pragma once

#include <array>

namespace wtsim {

// Coefficients of the analytic power-coefficient surface
//   C_p(lambda, beta) = c1*(c2/L - c3*beta - c4)*exp(-c5/L) + c6*lambda
//   1/L = 1/(lambda + 0.08*beta) - 0.035/(beta^3 + 1)
// with beta in degrees.  The defaults describe a generic three-blade rotor
// peaking at C_p ~ 0.48 around lambda ~ 8.1 at zero pitch.
struct CpCoeffs {
    double c1 = 0.5176;
    double c2 = 116.0;
    double c3 = 0.4;
    double c4 = 5.0;
    double c5 = 21.0;
    double c6 = 0.0068;
};

struct TurbineParams {
    double rho = 1.225;     // air density, kg/m^3
    double radius = 0.0;    // rotor radius, m
    double beta_deg = 0.0;  // fixed blade pitch, degrees
    CpCoeffs cp;
    // Cached optimum of the C_p surface at beta_deg, filled by
    // make_turbine_params.
    double lambda_opt = 0.0;
    double cp_max = 0.0;
};

struct DriveTrainState {
    double w_m = 0.0;      // mechanical rotor speed, rad/s
    double theta_m = 0.0;  // mechanical angle, rad
};

struct MechParams {
    double inertia = 0.0;   // combined rotating inertia, kg*m^2
    double friction = 0.0;  // viscous friction, N*m*s/rad
};

inline constexpr double betz_limit = 16.0 / 27.0;

// Builds TurbineParams and caches (lambda_opt, cp_max) by sweeping the C_p
// surface over lambda in (0, 15].  Throws std::invalid_argument when the
// surface violates the Betz bound or is non-positive everywhere.
TurbineParams make_turbine_params(double rho, double radius, double beta_deg,
                                  const CpCoeffs& cp);

// lambda = R * w_m / v_wind.  Throws std::domain_error for v_wind <= 0; the
// scenario loader gates wind speed above zero.
double tip_speed_ratio(double radius, double w_m, double v_wind);

// C_p clamped into [0, betz_limit].
double power_coefficient(double lambda, double beta_deg, const CpCoeffs& cp);

// Kinetic power of the air column through the rotor disc, 0.5*rho*pi*R^2*v^3.
double air_power(double rho, double radius, double v_wind);

// Captured aerodynamic power, air_power * C_p.  Zero for v_wind <= 0.
double wind_power(const TurbineParams& p, double v_wind, double w_m);

// P_w / w_m, with the torque-coefficient form C_p(lambda)/lambda taking over
// near standstill so the startup torque stays finite.
double aero_torque(const TurbineParams& p, double v_wind, double w_m);

struct DriveTrainDerivative {
    double dw_m = 0.0;
    double dtheta_m = 0.0;
};

// Single-mass swing equation, generator convention for the electric torque:
//   J*dw/dt = T_aero - T_e - B*w
DriveTrainDerivative drive_train_derivative(const DriveTrainState& s, double t_aero,
                                            double t_e, const MechParams& mech);

}  // namespace wtsim
