#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "wtsim/pmsg.hpp"

using namespace wtsim;

TEST_CASE("make_pmsg_params derives totals and validates") {
    const PmsgParams p = make_pmsg_params(0.0015, 0.00025, 0.00095, 0.00095, 8.82, 26);
    CHECK(p.l_d == doctest::Approx(0.0012));
    CHECK(p.l_q == doctest::Approx(0.0012));
    CHECK_THROWS_AS(make_pmsg_params(-1.0, 1e-4, 1e-3, 1e-3, 1.0, 2), std::invalid_argument);
    CHECK_THROWS_AS(make_pmsg_params(0.01, 0.0, 0.0, 1e-3, 1.0, 2), std::invalid_argument);
    CHECK_THROWS_AS(make_pmsg_params(0.01, 1e-4, 1e-3, 1e-3, 0.0, 2), std::invalid_argument);
    CHECK_THROWS_AS(make_pmsg_params(0.01, 1e-4, 1e-3, 1e-3, 1.0, 0), std::invalid_argument);
}

TEST_CASE("flux linkages") {
    const PmsgParams p = make_pmsg_params(0.0, 0.0, 0.01, 0.02, 0.2, 4);
    // unmagnetized stator
    auto f = flux_linkages(p, 0.0, 0.0);
    CHECK(f.psi_sd == doctest::Approx(0.2));
    CHECK(f.psi_sq == 0.0);
    // L_d = 0.01, i_sd = -5, psi_f = 0.2 -> psi_sd = 0.15
    f = flux_linkages(p, -5.0, 0.0);
    CHECK(f.psi_sd == doctest::Approx(0.15));
    // L_q = 0.02, i_sq = 10 -> psi_sq = 0.2
    f = flux_linkages(p, 0.0, 10.0);
    CHECK(f.psi_sq == doctest::Approx(0.2));
}

TEST_CASE("electromagnetic torque") {
    PmsgParams p = make_pmsg_params(0.0, 0.0, 0.01, 0.01, 0.1, 4);  // L_d = L_q
    CHECK(electromagnetic_torque(p, 5.0, 0.0) == 0.0);
    // (3/2)*4*0.1*10 = 6, independent of i_sd for a non-salient machine
    CHECK(electromagnetic_torque(p, 0.0, 10.0) == doctest::Approx(6.0));
    CHECK(electromagnetic_torque(p, -7.0, 10.0) == doctest::Approx(6.0));
    // odd in i_sq when L_d = L_q
    CHECK(electromagnetic_torque(p, 3.0, -10.0) ==
          doctest::Approx(-electromagnetic_torque(p, 3.0, 10.0)));

    // reluctance term vanishes at i_sd = 0
    PmsgParams salient = make_pmsg_params(0.0, 0.0, 0.02, 0.01, 0.1, 4);
    CHECK(electromagnetic_torque(salient, 0.0, 10.0) ==
          doctest::Approx(1.5 * 4 * 0.1 * 10.0));
}

TEST_CASE("stator derivative special cases") {
    const PmsgParams p = make_pmsg_params(0.05, 0.0, 0.002, 0.002, 0.5, 8);

    // RL decay: w_e = 0, v = 0, currents decay toward zero
    PmsgState s{10.0, -4.0, 0.0, 0.0};
    auto d = stator_derivatives(p, s, 0.0, 0.0);
    CHECK(d.di_sd < 0.0);
    CHECK(d.di_sq > 0.0);

    // all inputs zero at w_e != 0: only the back-EMF drives the q axis
    s = PmsgState{0.0, 0.0, 0.0, 100.0};
    d = stator_derivatives(p, s, 0.0, 0.0);
    CHECK(d.di_sd == 0.0);
    CHECK(d.di_sq == doctest::Approx(100.0 * 0.5 / p.l_q));
}

TEST_CASE("steady-state voltages") {
    const PmsgParams p = make_pmsg_params(0.01, 0.0, 0.002, 0.002, 0.2, 4);
    auto v = steady_state_voltages(p, 0.0, 0.0, 0.0);
    CHECK(v.v_sd == 0.0);
    CHECK(v.v_sq == 0.0);
    // open circuit back-EMF: i = 0, w_e = 100, psi_f = 0.2 -> (0, 20)
    v = steady_state_voltages(p, 0.0, 0.0, 100.0);
    CHECK(v.v_sd == 0.0);
    CHECK(v.v_sq == doctest::Approx(20.0));
}

TEST_CASE("stator_derivatives of steady_state_voltages vanishes over random points") {
    // Randomized over the operating envelope of multi-MW direct-drive
    // machines; the residual bound is the spec'd 1e-9.
    std::mt19937 rng(90210u);
    std::uniform_real_distribution<double> r_s(0.0, 0.1);
    std::uniform_real_distribution<double> l(1e-3, 1e-2);
    std::uniform_real_distribution<double> psi(0.5, 10.0);
    std::uniform_int_distribution<int> poles(1, 40);
    std::uniform_real_distribution<double> cur(-2000.0, 2000.0);
    std::uniform_real_distribution<double> speed(-150.0, 150.0);

    for (int k = 0; k < 1000; ++k) {
        const double l_ls = l(rng) * 0.1;
        const PmsgParams p =
            make_pmsg_params(r_s(rng), l_ls, l(rng), l(rng), psi(rng), poles(rng));
        PmsgState s{cur(rng), cur(rng), 0.0, speed(rng)};
        const DqVoltage v = steady_state_voltages(p, s.i_sd, s.i_sq, s.w_e);
        const StatorDerivative d = stator_derivatives(p, s, v.v_sd, v.v_sq);
        CHECK(std::abs(d.di_sd) <= 1e-9);
        CHECK(std::abs(d.di_sq) <= 1e-9);
    }
}

TEST_CASE("instantaneous power balance along the dynamic equations") {
    // Electrical output power equals converted power minus resistive loss
    // minus the rate of change of stored magnetic energy:
    //   1.5 (v i) = T_e w_m - 1.5 R i^2 - d/dt [1.5 (Ld i_sd^2 + Lq i_sq^2)/2]
    // Checked pointwise on the non-salient reference-class machine; the
    // tolerance is 0.1% of the 2 MW rating.
    const PmsgParams p = make_pmsg_params(0.0015, 0.00025, 0.00095, 0.00095, 8.82, 26);
    std::mt19937 rng(5150u);
    std::uniform_real_distribution<double> cur(-3000.0, 3000.0);
    std::uniform_real_distribution<double> volt(-600.0, 600.0);
    std::uniform_real_distribution<double> speed(-70.0, 70.0);

    for (int k = 0; k < 2000; ++k) {
        PmsgState s{cur(rng), cur(rng), 0.0, speed(rng)};
        const double v_sd = volt(rng);
        const double v_sq = volt(rng);
        const double w_m = s.w_e / p.pole_pairs;

        const StatorDerivative d = stator_derivatives(p, s, v_sd, v_sq);
        const double p_elec = 1.5 * (v_sd * s.i_sd + v_sq * s.i_sq);
        const double p_loss = 1.5 * p.r_s * (s.i_sd * s.i_sd + s.i_sq * s.i_sq);
        const double dE_mag = 1.5 * (p.l_d * s.i_sd * d.di_sd + p.l_q * s.i_sq * d.di_sq);
        const double t_e = electromagnetic_torque(p, s.i_sd, s.i_sq);

        const double residual = p_elec - (t_e * w_m - p_loss - dE_mag);
        CHECK(std::abs(residual) <= 1e-3 * 2e6);
    }
}
