#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "wtsim/transforms.hpp"

using namespace wtsim;

namespace {

// Independent oracle: the amplitude-invariant transform written as an
// explicit matrix product, kept separate from the library evaluation path.
Dq0 oracle_abc_to_dq0(const ThreePhase& x, double theta) {
    const double r = 2.0 * M_PI / 3.0;
    Dq0 out;
    out.d = (2.0 / 3.0) *
            (x.a * std::cos(theta) + x.b * std::cos(theta - r) + x.c * std::cos(theta + r));
    out.q = -(2.0 / 3.0) *
            (x.a * std::sin(theta) + x.b * std::sin(theta - r) + x.c * std::sin(theta + r));
    out.zero = (x.a + x.b + x.c) / 3.0;
    return out;
}

}  // namespace

TEST_CASE("angle wrap stays in [0, 2pi)") {
    CHECK(Angle::wrap(0.0).rad == doctest::Approx(0.0));
    CHECK(Angle::wrap(two_pi).rad == doctest::Approx(0.0));
    CHECK(Angle::wrap(-0.5).rad == doctest::Approx(two_pi - 0.5));
    CHECK(Angle::wrap(7.0 * two_pi + 1.0).rad == doctest::Approx(1.0));
}

TEST_CASE("abc_to_dq0 zero input maps to zero") {
    const Dq0 out = abc_to_dq0(ThreePhase{0, 0, 0}, Angle::wrap(1.234));
    CHECK(out.d == 0.0);
    CHECK(out.q == 0.0);
    CHECK(out.zero == 0.0);
}

TEST_CASE("abc_to_dq0 balanced snapshot at theta = 0") {
    // (1, -0.5, -0.5) is a balanced set at its phase-a peak; the
    // amplitude-invariant convention puts the peak on the d axis.
    const ThreePhase x{1.0, -0.5, -0.5};
    const Dq0 expect = oracle_abc_to_dq0(x, 0.0);
    CHECK(expect.d == doctest::Approx(1.0).epsilon(1e-12));

    const Dq0 out = abc_to_dq0(x, Angle{0.0});
    CHECK(out.d == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(out.q == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::abs(out.zero) < 1e-15);
}

TEST_CASE("dq0_to_abc unit d-axis puts phase a at its peak") {
    const ThreePhase out = dq0_to_abc(Dq0{1.0, 0.0, 0.0}, Angle{0.0});
    CHECK(out.a == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(out.b == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(out.c == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("round trip, linearity and balanced zero channel over random cases") {
    std::mt19937 rng(20240711u);
    std::uniform_real_distribution<double> amp(-1000.0, 1000.0);
    std::uniform_real_distribution<double> ang(0.0, two_pi);

    for (int k = 0; k < 10000; ++k) {
        const ThreePhase x{amp(rng), amp(rng), amp(rng)};
        const Angle theta = Angle::wrap(ang(rng));

        // round trip to <= 1e-9 relative error
        const ThreePhase back = dq0_to_abc(abc_to_dq0(x, theta), theta);
        const double scale = std::max({1.0, std::abs(x.a), std::abs(x.b), std::abs(x.c)});
        CHECK(std::abs(back.a - x.a) <= 1e-9 * scale);
        CHECK(std::abs(back.b - x.b) <= 1e-9 * scale);
        CHECK(std::abs(back.c - x.c) <= 1e-9 * scale);

        // linearity: T(ax + by) = a T(x) + b T(y)
        const ThreePhase y{amp(rng), amp(rng), amp(rng)};
        const double a = amp(rng) / 100.0;
        const double b = amp(rng) / 100.0;
        const ThreePhase mix{a * x.a + b * y.a, a * x.b + b * y.b, a * x.c + b * y.c};
        const Dq0 tx = abc_to_dq0(x, theta);
        const Dq0 ty = abc_to_dq0(y, theta);
        const Dq0 tm = abc_to_dq0(mix, theta);
        const double lscale = 1.0 + std::abs(tm.d) + std::abs(tm.q) + std::abs(tm.zero);
        CHECK(std::abs(tm.d - (a * tx.d + b * ty.d)) <= 1e-9 * lscale);
        CHECK(std::abs(tm.q - (a * tx.q + b * ty.q)) <= 1e-9 * lscale);
        CHECK(std::abs(tm.zero - (a * tx.zero + b * ty.zero)) <= 1e-9 * lscale);
    }
}

TEST_CASE("balanced positive-sequence set is amplitude invariant with zero channel") {
    std::mt19937 rng(77123u);
    std::uniform_real_distribution<double> mag(0.1, 800.0);
    std::uniform_real_distribution<double> ang(0.0, two_pi);

    for (int k = 0; k < 2000; ++k) {
        const double m = mag(rng);
        const double wt = ang(rng);   // signal phase = frame angle (tracking)
        const double r = two_pi / 3.0;
        const ThreePhase x{m * std::cos(wt), m * std::cos(wt - r), m * std::cos(wt + r)};
        const Dq0 out = abc_to_dq0(x, Angle::wrap(wt));
        CHECK(std::hypot(out.d, out.q) == doctest::Approx(m).epsilon(1e-9));
        CHECK(out.q == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(std::abs(out.zero) <= 1e-12 * std::max(1.0, m));
    }
}

TEST_CASE("rotate_dq matches complex rotation and composes with the transforms") {
    const DqPair v{3.0, -2.0};
    const double phi = 0.7;
    const DqPair r = rotate_dq(v, phi);
    CHECK(r.d == doctest::Approx(3.0 * std::cos(phi) + 2.0 * std::sin(phi)));
    CHECK(r.q == doctest::Approx(3.0 * std::sin(phi) - 2.0 * std::cos(phi)));
    const DqPair back = rotate_dq(r, -phi);
    CHECK(back.d == doctest::Approx(v.d));
    CHECK(back.q == doctest::Approx(v.q));
}

TEST_CASE("ideal grid angle") {
    AngleSourceSpec src;
    src.mode = AngleMode::ideal;
    src.w_nom = two_pi * 50.0;
    src.theta0 = 0.0;
    CHECK(grid_angle(0.0, src, nullptr).rad == doctest::Approx(0.0));
    // 2*pi*50*0.01 = pi
    CHECK(grid_angle(0.01, src, nullptr).rad == doctest::Approx(M_PI).epsilon(1e-12));
}

TEST_CASE("SRF-PLL locks onto an undistorted balanced grid within 5 cycles") {
    const double f = 50.0;
    const double w = two_pi * f;
    const double v_nom = 563.3826;
    const double theta0 = 0.5;  // true source phase offset the PLL must find
    const double dt = 1e-4;

    PllParams params;
    params.w_nom = w;
    params.v_nom = v_nom;
    params.kp = 133.0;
    params.ki = 8880.0;

    PllState pll;  // starts at theta = 0, i.e. 0.5 rad of initial error

    AngleSourceSpec src{AngleMode::pll, w, 0.0};
    for (int i = 0; i * dt < 0.1; ++i) {  // 5 cycles at 50 Hz
        const double t = i * dt;
        const double theta_true = w * t + theta0;
        // Generate the measurement through the real transform chain.
        const ThreePhase v_abc = dq0_to_abc(Dq0{v_nom, 0.0, 0.0}, Angle::wrap(theta_true));
        const Dq0 v_src = abc_to_dq0(v_abc, Angle::wrap(w * t));  // source frame
        pll_step(pll, params, DqPair{v_src.d, v_src.q}, w * t, dt);
    }
    const double theta_true = w * 0.1 + theta0;
    const double err = Angle::wrap(grid_angle(0.1, src, &pll).rad - theta_true).rad;
    const double err_wrapped = std::min(err, two_pi - err);
    CHECK(err_wrapped < 0.01);
}
