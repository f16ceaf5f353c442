#pragma once

#include "wtsim/transforms.hpp"

namespace wtsim {

// PCC-referenced network, solved in the grid-synchronous dq frame: the
// converter branch (output filter + step-up transformer in series) is the
// dynamic RL state, everything behind the PCC is a Thevenin source treated
// quasi-statically at the synchronous frequency.  With x = d + jq the branch
// obeys  L_b dI/dt = V_conv - (R_b + jw_s L_b) I - V_pcc  and V_pcc comes from
// the algebraic node solve below.
struct GridParams {
    double v_nom = 0.0;  // Thevenin source line-to-neutral peak, V
    double f_nom = 0.0;  // Hz
    double r_g = 0.0;    // grid Thevenin resistance, ohm
    double l_g = 0.0;    // grid Thevenin inductance, H
    double r_tr = 0.0;   // transformer series resistance (converter side), ohm
    double l_tr = 0.0;   // transformer series inductance, H
    double r_f = 0.0;    // output filter resistance, ohm
    double l_f = 0.0;    // output filter inductance, H

    double w_nom() const { return two_pi * f_nom; }
};

// Where the three-phase fault shunt sits.
//   pcc        - at the PCC bus itself
//   filter_bus - between filter and transformer (converter side)
//   remote     - at an interior grid bus, with remote_frac of the grid
//                impedance between the PCC and the faulted bus
enum class FaultLocation { pcc, filter_bus, remote };

struct FaultSpec {
    bool enabled = false;
    double t_on = 0.0;   // s
    double t_off = 0.0;  // s
    double r_fault = 0.0;  // shunt resistance at the faulted bus, ohm
    FaultLocation location = FaultLocation::pcc;
    double remote_frac = 0.5;  // used only for FaultLocation::remote
};

// true iff fault.enabled and t_on <= t < t_off.
bool fault_active(const FaultSpec& fault, double t);

// Converter branch current in the grid dq frame, positive injecting into the
// network.
struct NetworkState {
    double i_d = 0.0;  // A
    double i_q = 0.0;  // A
};

struct PccMeasurement {
    double v_d = 0.0;   // V
    double v_q = 0.0;   // V
    double p = 0.0;     // W injected at the PCC
    double q = 0.0;     // var injected at the PCC
    double v_pu = 0.0;  // |v| / v_nom
};

struct PqPair {
    double p = 0.0;
    double q = 0.0;
};

// Amplitude-invariant dq power:
//   p = (3/2)(v_d i_d + v_q i_q),  q = (3/2)(v_q i_d - v_d i_q)
PqPair instantaneous_pq(DqPair v, DqPair i);

// Series branch the network state flows through: everything from the
// converter terminals to the solved (faulted) node integrates dynamically,
// the Thevenin tail behind that node is quasi-static.  For the default PCC
// fault this is filter + transformer; a remote fault adds the PCC-side share
// of the grid impedance to the branch.
struct BranchImpedance {
    double r = 0.0;  // ohm
    double l = 0.0;  // H
};
BranchImpedance converter_branch(const GridParams& p, const FaultSpec& fault);

// Algebraic PCC solve for a given injected current.
PccMeasurement solve_pcc(const GridParams& p, const FaultSpec& fault,
                         const NetworkState& s, bool fault_on);

struct NetworkDerivative {
    double di_d = 0.0;  // A/s
    double di_q = 0.0;  // A/s
    PccMeasurement pcc;
};

NetworkDerivative network_derivative(const GridParams& p, const FaultSpec& fault,
                                     const NetworkState& s, DqPair v_conv,
                                     bool fault_on, double w_s);

}  // namespace wtsim
