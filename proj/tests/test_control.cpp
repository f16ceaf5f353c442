#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "wtsim/control.hpp"

using namespace wtsim;

namespace {

PiController pi(double kp, double ki, double lo, double hi) {
    PiController c;
    c.kp = kp;
    c.ki = ki;
    c.out_min = lo;
    c.out_max = hi;
    return c;
}

PmsgParams machine(double l_d, double l_q, double psi_f) {
    PmsgParams p;
    p.l_d = l_d;
    p.l_q = l_q;
    p.psi_f = psi_f;
    p.pole_pairs = 4;
    return p;
}

}  // namespace

TEST_CASE("pi_step basics") {
    PiController c = pi(1.0, 0.0, -10.0, 10.0);
    CHECK(pi_step(c, 0.0, 0.01) == 0.0);

    c = pi(1.0, 0.0, -10.0, 10.0);
    CHECK(pi_step(c, 2.0, 0.01) == doctest::Approx(2.0));

    // integral accumulation: ki*e*dt per step
    c = pi(0.0, 10.0, -10.0, 10.0);
    CHECK(pi_step(c, 1.0, 0.1) == doctest::Approx(1.0));
    CHECK(pi_step(c, 1.0, 0.1) == doctest::Approx(2.0));
}

TEST_CASE("pi_step conditional anti-windup hand trace") {
    // kp=0, ki=10, e=1, dt=0.1, out_max=0.5: the first step integrates to the
    // limit, every further identical step holds the integrator at 0.5.
    PiController c = pi(0.0, 10.0, -0.5, 0.5);
    CHECK(pi_step(c, 1.0, 0.1) == doctest::Approx(0.5));
    CHECK(c.integ == doctest::Approx(0.5));
    for (int k = 0; k < 5; ++k) {
        CHECK(pi_step(c, 1.0, 0.1) == doctest::Approx(0.5));
        CHECK(c.integ == doctest::Approx(0.5));
    }
    // reversal unwinds immediately, no stored windup
    CHECK(pi_step(c, -1.0, 0.1) < 0.5);
}

TEST_CASE("anti-windup recovery after a long saturated interval") {
    // Integrator plant dy/dt = u, PI designed for a ~10 rad/s loop, output
    // limited to +-1.  An unreachable reference saturates the loop for two
    // seconds; after the reference returns in range the output must settle to
    // within 5% in less than 10 design time constants (1 s).
    const double dt = 1e-3;
    const double wc = 10.0;
    PiController c = pi(wc, wc * wc / 4.0, -1.0, 1.0);
    c.aw = AntiWindup::conditional;

    double y = 0.0;
    double ref = 100.0;  // unreachable: u saturates at 1, y ramps slowly
    for (int i = 0; i < 2000; ++i) {
        const double u = pi_step(c, ref - y, dt);
        y += u * dt;
    }
    CHECK(c.integ <= 1.0);  // integrator bounded by the output limits

    ref = y + 0.05;  // small reachable step from wherever the ramp got to
    double t_settle = -1.0;
    for (int i = 0; i < 4000; ++i) {
        const double u = pi_step(c, ref - y, dt);
        y += u * dt;
        if (std::abs(ref - y) <= 0.05 * 0.05 && t_settle < 0.0)
            t_settle = i * dt;
    }
    CHECK(t_settle >= 0.0);
    CHECK(t_settle < 10.0 / wc);
}

TEST_CASE("msc control cascade with hand-computed gains") {
    MscLoops loops;
    loops.speed = pi(3.0, 0.0, -100.0, 100.0);
    loops.i_d = pi(1.5, 0.0, -1000.0, 1000.0);
    loops.i_q = pi(2.0, 0.0, -1000.0, 1000.0);

    const PmsgParams p = machine(0.02, 0.01, 0.3);

    // w_e = 0: outputs are exactly the inner PI outputs
    // speed err 1 -> i_sq_ref 3; i_sq err 3-1=2 -> v_sq' 4; i_sd err 5-3=2 -> v_sd' 3
    MscRefs refs{2.0, 5.0};
    const DqPair cmd = msc_control_step(refs, 1.0, 3.0, 1.0, 0.0, p, loops, 1e-4);
    CHECK(cmd.d == doctest::Approx(3.0));
    CHECK(cmd.q == doctest::Approx(4.0));
}

TEST_CASE("msc decoupling terms") {
    // zero-gain PIs isolate the feedforward arithmetic
    MscLoops loops;
    loops.speed = pi(0.0, 0.0, -100.0, 100.0);
    loops.i_d = pi(0.0, 0.0, -1000.0, 1000.0);
    loops.i_q = pi(0.0, 0.0, -1000.0, 1000.0);

    const PmsgParams p = machine(0.02, 0.01, 0.3);
    MscRefs refs{0.0, 0.0};

    // v_sd* = v_sd' - w_e L_q i_sq = 0 - 100*0.01*5 = -5
    DqPair cmd = msc_control_step(refs, 0.0, 0.0, 5.0, 100.0, p, loops, 1e-4);
    CHECK(cmd.d == doctest::Approx(-5.0));
    // v_sq* = 0 + w_e L_d i_sd + w_e psi_f with i_sd = 0
    CHECK(cmd.q == doctest::Approx(100.0 * 0.3));

    // with i_sd present the q row picks up w_e L_d i_sd
    cmd = msc_control_step(refs, 0.0, 2.0, 5.0, 100.0, p, loops, 1e-4);
    CHECK(cmd.q == doctest::Approx(100.0 * 0.02 * 2.0 + 100.0 * 0.3));

    // zero-error equilibrium: commands reduce to the pure feedforward terms
    loops.feedforward = true;
    cmd = msc_control_step(refs, 0.0, 0.0, 0.0, 120.0, p, loops, 1e-4);
    CHECK(cmd.d == doctest::Approx(0.0));
    CHECK(cmd.q == doctest::Approx(120.0 * 0.3));

    // feedforward disabled: outputs are the PI outputs only
    loops.feedforward = false;
    cmd = msc_control_step(refs, 0.0, 0.0, 5.0, 100.0, p, loops, 1e-4);
    CHECK(cmd.d == 0.0);
    CHECK(cmd.q == 0.0);
}

TEST_CASE("gsc control step") {
    GscLoops loops;
    loops.v_dc = pi(0.0, 0.0, -5000.0, 5000.0);
    loops.q = pi(0.0, 0.0, -5000.0, 5000.0);
    loops.i_d = pi(0.0, 0.0, -1000.0, 1000.0);
    loops.i_q = pi(0.0, 0.0, -1000.0, 1000.0);

    GscRefs refs{1100.0, 0.0};

    // v_dl* = v_d' - w_s L_f i_q + v_pcc_d = 0 - 314.16*0.005*10 + 400 = 384.292
    DqPair cmd = gsc_control_step(refs, 1100.0, 0.0, 10.0, DqPair{400.0, 0.0}, 0.0,
                                  314.16, 0.005, loops, 1e-4);
    CHECK(cmd.d == doctest::Approx(400.0 - 15.708).epsilon(1e-6));
    CHECK(cmd.q == doctest::Approx(0.0));

    // q row picks up +w_s L_f i_d and the measured v_pcc_q
    cmd = gsc_control_step(refs, 1100.0, 4.0, 0.0, DqPair{400.0, 12.0}, 0.0,
                           314.16, 0.005, loops, 1e-4);
    CHECK(cmd.q == doctest::Approx(314.16 * 0.005 * 4.0 + 12.0));

    // couplings removed: outputs equal the inner PI outputs (zero here)
    cmd = gsc_control_step(refs, 1100.0, 4.0, 10.0, DqPair{0.0, 0.0}, 0.0, 0.0,
                           0.005, loops, 1e-4);
    CHECK(cmd.d == 0.0);
    CHECK(cmd.q == 0.0);

    // feedforward disabled drops every non-PI term
    loops.feedforward = false;
    cmd = gsc_control_step(refs, 1100.0, 4.0, 10.0, DqPair{400.0, 12.0}, 0.0,
                           314.16, 0.005, loops, 1e-4);
    CHECK(cmd.d == 0.0);
    CHECK(cmd.q == 0.0);
}

TEST_CASE("droop reactive reference") {
    DroopParams d;
    d.v_pcc_ref = 1.0;
    d.k_q = 2e6;
    d.q_min = -5e5;
    d.q_max = 5e5;

    CHECK(q_ref_from_droop(d, 1.0) == 0.0);
    // deficit 0.3 with k_q = 2e6 clamps at q_max = 5e5
    CHECK(q_ref_from_droop(d, 0.7) == doctest::Approx(5e5));
    // overvoltage absorbs
    CHECK(q_ref_from_droop(d, 1.1) < 0.0);
    CHECK(q_ref_from_droop(d, 0.0) == doctest::Approx(5e5));

    // monotone non-decreasing in the deficit
    double prev = q_ref_from_droop(d, 1.3);
    for (double v = 1.3; v >= 0.0; v -= 0.01) {
        const double q = q_ref_from_droop(d, v);
        CHECK(q >= prev - 1e-12);
        prev = q;
    }
}
