#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "wtsim/converter.hpp"
#include "wtsim/rk4.hpp"

using namespace wtsim;

TEST_CASE("modulation limit") {
    const Vsc vsc{1.15, VscSide::grid};
    CHECK(modulation_limit(vsc, 1000.0) == doctest::Approx(575.0));
}

TEST_CASE("realize_voltage inside the circle is the identity") {
    const Vsc vsc{1.15, VscSide::grid};
    auto out = realize_voltage(vsc, 1000.0, DqPair{0.0, 0.0});
    CHECK(out.d == 0.0);
    CHECK(out.q == 0.0);
    CHECK_FALSE(out.saturated);

    // |cmd| = 500 < 575: passed through unchanged
    out = realize_voltage(vsc, 1000.0, DqPair{300.0, 400.0});
    CHECK(out.d == 300.0);
    CHECK(out.q == 400.0);
    CHECK_FALSE(out.saturated);
}

TEST_CASE("realize_voltage projects radially onto the boundary") {
    const Vsc vsc{1.15, VscSide::grid};
    // (690, 920) has magnitude 1150, twice the 575 V limit
    const auto out = realize_voltage(vsc, 1000.0, DqPair{690.0, 920.0});
    CHECK(std::hypot(out.d, out.q) == doctest::Approx(575.0));
    CHECK(out.d == doctest::Approx(345.0));
    CHECK(out.q == doctest::Approx(460.0));
    // direction preserved
    CHECK(out.q / out.d == doctest::Approx(920.0 / 690.0));
    CHECK(out.saturated);
}

TEST_CASE("dc link derivative") {
    CHECK(dc_link_derivative(DcLink{0.01, 1000.0}, 5e4, 5e4) == 0.0);
    // c = 0.01 F, v = 1000 V, surplus 10 kW -> 1000 V/s
    CHECK(dc_link_derivative(DcLink{0.01, 1000.0}, 6e4, 5e4) == doctest::Approx(1000.0));
    CHECK(dc_link_derivative(DcLink{0.01, 1000.0}, 4e4, 5e4) < 0.0);
}

TEST_CASE("duty ratio export") {
    const DqPair d = duty_ratio(DqPair{275.0, -550.0}, 1100.0);
    CHECK(d.d == doctest::Approx(0.5));
    CHECK(d.q == doctest::Approx(-1.0));
}

TEST_CASE("lossless DC-link energy audit along an integrated trajectory") {
    // d/dt (1/2 C v^2) = p_in - p_out; integrate a varying power imbalance
    // and compare stored energy change against the trapezoidal power integral.
    const double c_dc = 0.12;
    const auto p_in = [](double t) { return 2.0e6 + 3.0e5 * std::sin(40.0 * t); };
    const auto p_out = [](double t) { return 2.0e6 - 1.0e5 * std::cos(25.0 * t); };

    std::array<double, 1> x{1100.0};
    const double dt = 2e-5;
    double energy_in = 0.0;
    double prev = p_in(0.0) - p_out(0.0);
    for (int i = 0; i < 25000; ++i) {  // 0.5 s
        const double t = i * dt;
        x = rk4_step(x, t, dt, [&](const std::array<double, 1>& s, double tt) {
            return std::array<double, 1>{
                dc_link_derivative(DcLink{c_dc, s[0]}, p_in(tt), p_out(tt))};
        });
        const double now = p_in(t + dt) - p_out(t + dt);
        energy_in += 0.5 * dt * (prev + now);
        prev = now;
    }
    const double stored = 0.5 * c_dc * (x[0] * x[0] - 1100.0 * 1100.0);
    CHECK(stored == doctest::Approx(energy_in).epsilon(1e-3));  // 0.1%
}
