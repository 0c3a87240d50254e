#pragma once

#include "ohmscope/complex_impedance.hpp"

namespace ohmscope {

enum class Polarity { P, N };

// Physical constants of one device. The leak family (w, process_constant,
// constant_a/b, barrier_lowering, thermal_voltage, gate_length) feeds the
// subthreshold current; threshold_voltage/k_prime/w_over_l feed the
// on-resistances; c_gd/c_db feed the parasitic reactance.
struct MosfetParams {
    Polarity polarity = Polarity::N;
    double w = 10.0;                  // normalized width, dimensionless
    double gate_length = 180e-9;      // meters
    double process_constant = 1e-7;   // amperes per unit width
    double constant_a = 1.0;
    double constant_b = 2.0;
    double barrier_lowering = 0.05;   // volts
    double thermal_voltage = 0.02585; // volts
    double threshold_voltage = 0.4;   // volts
    double k_prime = 1e-4;            // A/V^2
    double w_over_l = 2.0;
    double c_gd = 10e-15;             // farads
    double c_db = 10e-15;             // farads
};

struct BiasPoint {
    double v_ds = 3.3;       // volts
    double v_d = 3.3;        // volts
    double v_s = 0.0;        // volts
    double frequency = 1e9;  // hertz, > 0
};

// 2-input NAND small-signal network seen from the supply side.
struct NandGateModel {
    MosfetParams pmos;
    MosfetParams nmos;
    double internal_node_cap_3c = 1.5e-15;  // farads
    double supply_node_cap_7c = 3.5e-15;    // farads
    double fanout_cap_c0 = 1e-15;           // farads
    BiasPoint bias;
};

// Shipped default device set (180 nm-class magnitudes). See README for the
// full table; every golden test value is pinned against these.
MosfetParams default_nmos();
MosfetParams default_pmos();
NandGateModel default_nand_model();

// Subthreshold leakage current at drain-source voltage v_ds.
// The gate-length exponent is normalized to units of 1e-9 m.
double leakage_current(const MosfetParams& p, double v_ds);

// Cutoff impedance v_ds / I_leak; purely resistive. v_ds must be > 0.
ComplexImpedance cutoff_impedance(const MosfetParams& p, double v_ds);

// Effective on-resistances. Overdrive is (v_d - v_s) - V_th in magnitudes,
// one formula for both polarities; must be positive (device past threshold).
double linear_resistance(const MosfetParams& p, double v_d, double v_s);
double saturation_resistance(const MosfetParams& p, double v_d, double v_s);
double effective_on_resistance(const MosfetParams& p, double v_d, double v_s);

// Capacitive reactance -1/(2*pi*f*c); always negative.
double equivalent_reactance(double c_eq, double f);

// Active-region device impedance: effective on-resistance plus the reactance
// of C_gd + C_db at the bias frequency.
ComplexImpedance active_impedance(const MosfetParams& p, const BiasPoint& bias);

// Complex parallel combination ab/(a+b).
ComplexImpedance parallel(const ComplexImpedance& a, const ComplexImpedance& b);

// Pull-up / pull-down decomposition of one NAND input case. Exposed so tests
// can check structural identities (Z01 and Z10 share the pull-up term).
struct NandCaseParts {
    ComplexImpedance pull_up;
    ComplexImpedance pull_down;
    ComplexImpedance total() const {
        return {pull_up.resistance + pull_down.resistance,
                pull_up.reactance + pull_down.reactance};
    }
};

NandCaseParts nand_parts(const NandGateModel& model, int a, int b);

// Supply-side impedance of the gate for logic inputs (a, b).
ComplexImpedance nand_impedance(const NandGateModel& model, int a, int b);

}  // namespace ohmscope
