#include "ohmscope/impedance_model.hpp"

#include <cmath>
#include <string>

#include "ohmscope/errors.hpp"

namespace ohmscope {

MosfetParams default_nmos() {
    MosfetParams p;
    p.polarity = Polarity::N;
    p.w = 10.0;
    p.threshold_voltage = 0.4;
    p.k_prime = 1e-4;
    p.w_over_l = 2.0;
    return p;
}

MosfetParams default_pmos() {
    MosfetParams p;
    p.polarity = Polarity::P;
    p.w = 15.0;
    p.threshold_voltage = 0.45;
    p.k_prime = 1e-4;
    p.w_over_l = 1.5;
    return p;
}

NandGateModel default_nand_model() {
    NandGateModel m;
    m.pmos = default_pmos();
    m.nmos = default_nmos();
    return m;
}

double leakage_current(const MosfetParams& p, double v_ds) {
    // W * C * B^(-B*Lg) * exp(dPhi/Vt) * (exp(A*vds/Vt) - 1), Lg in 1e-9 m units.
    double lg = p.gate_length / 1e-9;
    double i = p.w * p.process_constant * std::pow(p.constant_b, -p.constant_b * lg) *
               std::exp(p.barrier_lowering / p.thermal_voltage) *
               (std::exp(p.constant_a * v_ds / p.thermal_voltage) - 1.0);
    if (!std::isfinite(i))
        throw ModelParameterError("leakage_current: non-finite result (parameter overflow)");
    return i;
}

ComplexImpedance cutoff_impedance(const MosfetParams& p, double v_ds) {
    if (v_ds <= 0.0)
        throw DomainError("cutoff_impedance: v_ds must be > 0, got " + std::to_string(v_ds));
    double r = v_ds / leakage_current(p, v_ds);
    if (!std::isfinite(r))
        throw ModelParameterError("cutoff_impedance: non-finite resistance");
    return {r, 0.0};
}

static double overdrive_or_throw(const MosfetParams& p, double v_d, double v_s,
                                 const char* who) {
    // Magnitude convention: one symmetric formula serves both polarities.
    double ov = (v_d - v_s) - p.threshold_voltage;
    if (ov <= 0.0)
        throw RegionError(std::string(who) + ": overdrive <= 0 (device not past threshold)");
    return ov;
}

double linear_resistance(const MosfetParams& p, double v_d, double v_s) {
    double ov = overdrive_or_throw(p, v_d, v_s, "linear_resistance");
    return (0.5 * ov) / ((3.0 / 8.0) * p.k_prime * p.w_over_l * ov * ov);
}

double saturation_resistance(const MosfetParams& p, double v_d, double v_s) {
    double ov = overdrive_or_throw(p, v_d, v_s, "saturation_resistance");
    return (v_d - v_s) / (0.5 * p.k_prime * p.w_over_l * ov * ov);
}

double effective_on_resistance(const MosfetParams& p, double v_d, double v_s) {
    return 0.5 * (linear_resistance(p, v_d, v_s) + saturation_resistance(p, v_d, v_s));
}

double equivalent_reactance(double c_eq, double f) {
    if (f <= 0.0) throw DomainError("equivalent_reactance: frequency must be > 0");
    if (c_eq <= 0.0) throw DomainError("equivalent_reactance: capacitance must be > 0");
    return -1.0 / (2.0 * M_PI * f * c_eq);
}

ComplexImpedance active_impedance(const MosfetParams& p, const BiasPoint& bias) {
    return {effective_on_resistance(p, bias.v_d, bias.v_s),
            equivalent_reactance(p.c_gd + p.c_db, bias.frequency)};
}

ComplexImpedance parallel(const ComplexImpedance& a, const ComplexImpedance& b) {
    std::complex<double> za = a.to_complex();
    std::complex<double> zb = b.to_complex();
    std::complex<double> sum = za + zb;
    if (sum == std::complex<double>(0.0, 0.0))
        throw SingularCombinationError("parallel: a + b = 0");
    return ComplexImpedance::from_complex(za * zb / sum);
}

NandCaseParts nand_parts(const NandGateModel& model, int a, int b) {
    const BiasPoint& bias = model.bias;
    ComplexImpedance zpa = active_impedance(model.pmos, bias);
    ComplexImpedance zna = active_impedance(model.nmos, bias);
    ComplexImpedance zpc = cutoff_impedance(model.pmos, bias.v_ds);
    ComplexImpedance znc = cutoff_impedance(model.nmos, bias.v_ds);
    ComplexImpedance z3c{0.0, equivalent_reactance(model.internal_node_cap_3c, bias.frequency)};
    // Supply-node and fanout caps sit in parallel at the output node.
    ComplexImpedance zeq0{0.0, equivalent_reactance(model.supply_node_cap_7c + model.fanout_cap_c0,
                                                    bias.frequency)};

    // Input 0 turns its PMOS on / NMOS off; input 1 the opposite. The
    // pull-down stack pairs input a with the transistor next to the internal
    // node and input b with the one next to ground.
    ComplexImpedance pu = parallel(a == 0 ? zpa : zpc, b == 0 ? zpa : zpc);
    ComplexImpedance stack_top = a == 0 ? znc : zna;
    ComplexImpedance stack_bottom = b == 0 ? znc : zna;
    ComplexImpedance inner = parallel(stack_top, z3c);
    ComplexImpedance series{inner.resistance + stack_bottom.resistance,
                            inner.reactance + stack_bottom.reactance};
    ComplexImpedance pd = parallel(series, zeq0);
    return {pu, pd};
}

ComplexImpedance nand_impedance(const NandGateModel& model, int a, int b) {
    return nand_parts(model, a, b).total();
}

}  // namespace ohmscope
