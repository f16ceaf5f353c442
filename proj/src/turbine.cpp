#include "wtsim/turbine.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wtsim {

namespace {
// Guards for the torque form near standstill.
constexpr double k_w_eps = 1e-6;       // rad/s below which P/w is ill-conditioned
constexpr double k_lambda_eps = 1e-3;  // floor for lambda in the C_q evaluation
}  // namespace

double tip_speed_ratio(double radius, double w_m, double v_wind) {
    if (v_wind <= 0.0)
        throw std::domain_error("tip_speed_ratio: wind speed must be > 0");
    return radius * w_m / v_wind;
}

namespace {
double raw_power_coefficient(double lambda, double beta_deg, const CpCoeffs& cp) {
    const double inv_gamma =
        1.0 / (lambda + 0.08 * beta_deg) - 0.035 / (beta_deg * beta_deg * beta_deg + 1.0);
    return cp.c1 * (cp.c2 * inv_gamma - cp.c3 * beta_deg - cp.c4) * std::exp(-cp.c5 * inv_gamma) +
           cp.c6 * lambda;
}
}  // namespace

double power_coefficient(double lambda, double beta_deg, const CpCoeffs& cp) {
    if (lambda <= 0.0)
        return 0.0;
    return std::clamp(raw_power_coefficient(lambda, beta_deg, cp), 0.0, betz_limit);
}

TurbineParams make_turbine_params(double rho, double radius, double beta_deg,
                                  const CpCoeffs& cp) {
    if (rho <= 0.0)
        throw std::invalid_argument("turbine: rho must be > 0");
    if (radius <= 0.0)
        throw std::invalid_argument("turbine: radius must be > 0");
    if (beta_deg < 0.0)
        throw std::invalid_argument("turbine: beta must be >= 0");

    TurbineParams p;
    p.rho = rho;
    p.radius = radius;
    p.beta_deg = beta_deg;
    p.cp = cp;

    // Dense sweep of the raw (unclamped) surface; smooth and single-peaked
    // for sane coefficients, so a fixed 1e-3 grid localizes the optimum well
    // below the 1e-3 tolerance the cached values are specified to.
    double best_lambda = 0.0;
    double best_cp = 0.0;
    for (int i = 1; i <= 15000; ++i) {
        const double lambda = i * 1e-3;
        const double c = raw_power_coefficient(lambda, beta_deg, cp);
        if (c > best_cp) {
            best_cp = c;
            best_lambda = lambda;
        }
    }
    p.lambda_opt = best_lambda;
    p.cp_max = best_cp;

    if (!(p.cp_max > 0.0 && p.cp_max < 0.593))
        throw std::invalid_argument("turbine: cp_max must lie in (0, 0.593)");
    return p;
}

double air_power(double rho, double radius, double v_wind) {
    if (v_wind <= 0.0)
        return 0.0;
    const double area = std::numbers::pi * radius * radius;
    return 0.5 * rho * area * v_wind * v_wind * v_wind;
}

double wind_power(const TurbineParams& p, double v_wind, double w_m) {
    if (v_wind <= 0.0)
        return 0.0;
    const double lambda = tip_speed_ratio(p.radius, w_m, v_wind);
    return air_power(p.rho, p.radius, v_wind) * power_coefficient(lambda, p.beta_deg, p.cp);
}

double aero_torque(const TurbineParams& p, double v_wind, double w_m) {
    if (v_wind <= 0.0)
        return 0.0;
    if (w_m > k_w_eps)
        return wind_power(p, v_wind, w_m) / w_m;

    // Startup: T = 0.5*rho*pi*R^3*v^2 * C_p(lambda)/lambda with lambda floored,
    // the limit of P/w as w -> 0 since C_p ~ c6*lambda there.
    const double lambda = std::max(p.radius * w_m / v_wind, k_lambda_eps);
    const double cq = power_coefficient(lambda, p.beta_deg, p.cp) / lambda;
    return air_power(p.rho, p.radius, v_wind) / v_wind * p.radius * cq;
}

DriveTrainDerivative drive_train_derivative(const DriveTrainState& s, double t_aero,
                                            double t_e, const MechParams& mech) {
    DriveTrainDerivative d;
    d.dw_m = (t_aero - t_e - mech.friction * s.w_m) / mech.inertia;
    d.dtheta_m = s.w_m;
    return d;
}

}  // namespace wtsim
