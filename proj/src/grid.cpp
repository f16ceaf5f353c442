#include "wtsim/grid.hpp"

#include <complex>

namespace wtsim {

namespace {

using Cx = std::complex<double>;

// Voltage of a faulted node fed by a Thevenin source behind z_src with the
// converter current injected at the node and the shunt r_fault to ground.
Cx faulted_node_voltage(Cx v_src, Cx z_src, Cx i_inj, double r_fault) {
    if (r_fault == 0.0)
        return Cx{0.0, 0.0};
    return (i_inj + v_src / z_src) / (1.0 / z_src + 1.0 / r_fault);
}

struct NodeSolution {
    Cx v_branch_end;  // voltage at the node the dynamic branch lands on
    Cx v_pcc;
    Cx i_pcc;  // current injected into the PCC from the converter side
};

NodeSolution solve_network(const GridParams& p, const FaultSpec& fault,
                           Cx i_conv, bool fault_on) {
    const double w = p.w_nom();
    const Cx v_src{p.v_nom, 0.0};
    const Cx z_g{p.r_g, w * p.l_g};

    NodeSolution out;
    switch (fault.location) {
    case FaultLocation::filter_bus: {
        // Dynamic branch is the filter; transformer + grid are quasi-static.
        const Cx z_down = Cx{p.r_tr, w * p.l_tr} + z_g;
        Cx v_fb;
        if (fault_on)
            v_fb = faulted_node_voltage(v_src, z_down, i_conv, fault.r_fault);
        else
            v_fb = v_src + z_down * i_conv;
        const Cx i_grid = (v_fb - v_src) / z_down;
        out.v_branch_end = v_fb;
        out.v_pcc = v_src + z_g * i_grid;
        out.i_pcc = i_grid;
        break;
    }
    case FaultLocation::remote: {
        // Shunt at an interior grid bus; remote_frac of z_g lies between the
        // PCC and the faulted bus and belongs to the dynamic branch, so the
        // quasi-static tail is only the source side z_gb.  The PCC is an
        // interior point of the branch.
        const Cx z_ga = fault.remote_frac * z_g;
        const Cx z_gb = (1.0 - fault.remote_frac) * z_g;
        Cx v_fault_bus;
        if (fault_on)
            v_fault_bus = faulted_node_voltage(v_src, z_gb, i_conv, fault.r_fault);
        else
            v_fault_bus = v_src + z_gb * i_conv;
        out.v_branch_end = v_fault_bus;
        out.v_pcc = v_fault_bus + z_ga * i_conv;
        out.i_pcc = i_conv;
        break;
    }
    case FaultLocation::pcc:
    default: {
        Cx v_pcc;
        if (fault_on)
            v_pcc = faulted_node_voltage(v_src, z_g, i_conv, fault.r_fault);
        else
            v_pcc = v_src + z_g * i_conv;
        out.v_branch_end = v_pcc;
        out.v_pcc = v_pcc;
        out.i_pcc = i_conv;
        break;
    }
    }
    return out;
}

PccMeasurement measure(const GridParams& p, const NodeSolution& n) {
    PccMeasurement m;
    m.v_d = n.v_pcc.real();
    m.v_q = n.v_pcc.imag();
    const PqPair pq = instantaneous_pq(DqPair{m.v_d, m.v_q},
                                       DqPair{n.i_pcc.real(), n.i_pcc.imag()});
    m.p = pq.p;
    m.q = pq.q;
    m.v_pu = std::abs(n.v_pcc) / p.v_nom;
    return m;
}

}  // namespace

bool fault_active(const FaultSpec& fault, double t) {
    return fault.enabled && t >= fault.t_on && t < fault.t_off;
}

PqPair instantaneous_pq(DqPair v, DqPair i) {
    return PqPair{1.5 * (v.d * i.d + v.q * i.q), 1.5 * (v.q * i.d - v.d * i.q)};
}

BranchImpedance converter_branch(const GridParams& p, const FaultSpec& fault) {
    switch (fault.location) {
    case FaultLocation::filter_bus:
        return BranchImpedance{p.r_f, p.l_f};
    case FaultLocation::remote:
        return BranchImpedance{p.r_f + p.r_tr + fault.remote_frac * p.r_g,
                               p.l_f + p.l_tr + fault.remote_frac * p.l_g};
    case FaultLocation::pcc:
    default:
        return BranchImpedance{p.r_f + p.r_tr, p.l_f + p.l_tr};
    }
}

PccMeasurement solve_pcc(const GridParams& p, const FaultSpec& fault,
                         const NetworkState& s, bool fault_on) {
    const NodeSolution n = solve_network(p, fault, Cx{s.i_d, s.i_q}, fault_on);
    return measure(p, n);
}

NetworkDerivative network_derivative(const GridParams& p, const FaultSpec& fault,
                                     const NetworkState& s, DqPair v_conv,
                                     bool fault_on, double w_s) {
    const BranchImpedance b = converter_branch(p, fault);
    const NodeSolution n = solve_network(p, fault, Cx{s.i_d, s.i_q}, fault_on);

    NetworkDerivative d;
    d.di_d = (v_conv.d - b.r * s.i_d + w_s * b.l * s.i_q - n.v_branch_end.real()) / b.l;
    d.di_q = (v_conv.q - b.r * s.i_q - w_s * b.l * s.i_d - n.v_branch_end.imag()) / b.l;
    d.pcc = measure(p, n);
    return d;
}

}  // namespace wtsim
