#pragma once

#include <array>
#include <cstddef>
#include <utility>

namespace wtsim {

// Classical 4th-order Runge-Kutta step over a fixed-size state vector.
// deriv(x, t) must return the state derivative; inputs the caller wants held
// constant across the step (zero-order hold) are captured in the functor.
template <std::size_t N, typename Deriv>
std::array<double, N> rk4_step(const std::array<double, N>& x, double t, double dt,
                               Deriv&& deriv) {
    using Vec = std::array<double, N>;

    const auto shifted = [](const Vec& base, double a, const Vec& k) {
        Vec r;
        for (std::size_t i = 0; i < N; ++i)
            r[i] = base[i] + a * k[i];
        return r;
    };

    const Vec k1 = deriv(x, t);
    const Vec k2 = deriv(shifted(x, 0.5 * dt, k1), t + 0.5 * dt);
    const Vec k3 = deriv(shifted(x, 0.5 * dt, k2), t + 0.5 * dt);
    const Vec k4 = deriv(shifted(x, dt, k3), t + dt);

    Vec out;
    for (std::size_t i = 0; i < N; ++i)
        out[i] = x[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

}  // namespace wtsim
