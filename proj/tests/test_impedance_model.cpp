#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ohmscope/errors.hpp"
#include "ohmscope/impedance_model.hpp"

using namespace ohmscope;

namespace {

// Frozen against an independent reimplementation of the closed-form device
// equations (arbitrary-precision cross-check). Any drift here is a model
// regression, not a tolerance issue.
constexpr double kLeakN = 8.148512310310678e-59;
constexpr double kLeakP = 1.2222768465466018e-58;
constexpr double kZcutN = 4.049819002941631e+58;
constexpr double kZcutP = 2.699879335294421e+58;
constexpr double kRlinP = 3118.9083820662768;
constexpr double kRsatP = 5417.051400430902;
constexpr double kReffP = 4267.979891248589;
constexpr double kRlinN = 2298.8505747126437;
constexpr double kRsatN = 3923.900118906064;
constexpr double kReffN = 3111.375346809354;

bool close(double got, double want, double rtol = 1e-12) {
    return std::abs(got - want) <= rtol * std::max(1.0, std::abs(want));
}

NandGateModel model_at(double frequency) {
    NandGateModel m = default_nand_model();
    m.bias.frequency = frequency;
    return m;
}

}  // namespace

TEST_CASE("default devices carry the shipped parameter set") {
    MosfetParams n = default_nmos();
    MosfetParams p = default_pmos();
    CHECK(n.polarity == Polarity::N);
    CHECK(p.polarity == Polarity::P);
    CHECK(n.w == 10.0);
    CHECK(p.w == 15.0);
    CHECK(n.threshold_voltage == 0.4);
    CHECK(p.threshold_voltage == 0.45);
    CHECK(n.w_over_l == 2.0);
    CHECK(p.w_over_l == 1.5);
}

TEST_CASE("leakage current matches the frozen evaluation") {
    NandGateModel m = default_nand_model();
    CHECK(close(leakage_current(m.nmos, m.bias.v_ds), kLeakN));
    CHECK(close(leakage_current(m.pmos, m.bias.v_ds), kLeakP));
    // v_ds = 0 leaves no drive: the bracket term vanishes exactly
    CHECK(leakage_current(m.nmos, 0.0) == 0.0);
    // monotone in v_ds
    CHECK(leakage_current(m.nmos, 2.0) < leakage_current(m.nmos, 3.0));
}

TEST_CASE("leakage overflow surfaces as a parameter error") {
    MosfetParams p = default_nmos();
    p.thermal_voltage = 1e-6;  // exp(A*3.3/Vt) overflows
    CHECK_THROWS_AS(leakage_current(p, 3.3), ModelParameterError);
}

TEST_CASE("cutoff impedance is the purely resistive v/i ratio") {
    NandGateModel m = default_nand_model();
    ComplexImpedance zn = cutoff_impedance(m.nmos, m.bias.v_ds);
    ComplexImpedance zp = cutoff_impedance(m.pmos, m.bias.v_ds);
    CHECK(close(zn.resistance, kZcutN));
    CHECK(close(zp.resistance, kZcutP));
    CHECK(zn.reactance == 0.0);
    CHECK(zp.reactance == 0.0);
    CHECK_THROWS_AS(cutoff_impedance(m.nmos, 0.0), DomainError);
    CHECK_THROWS_AS(cutoff_impedance(m.nmos, -1.0), DomainError);
}

TEST_CASE("on-resistances match the frozen evaluation") {
    NandGateModel m = default_nand_model();
    double vd = m.bias.v_d, vs = m.bias.v_s;
    CHECK(close(linear_resistance(m.pmos, vd, vs), kRlinP));
    CHECK(close(saturation_resistance(m.pmos, vd, vs), kRsatP));
    CHECK(close(effective_on_resistance(m.pmos, vd, vs), kReffP));
    CHECK(close(linear_resistance(m.nmos, vd, vs), kRlinN));
    CHECK(close(saturation_resistance(m.nmos, vd, vs), kRsatN));
    CHECK(close(effective_on_resistance(m.nmos, vd, vs), kReffN));
    // effective is the arithmetic mean of the two regions
    CHECK(close(effective_on_resistance(m.nmos, vd, vs),
                0.5 * (kRlinN + kRsatN)));
}

TEST_CASE("device below threshold has no on-resistance") {
    MosfetParams n = default_nmos();
    CHECK_THROWS_AS(linear_resistance(n, 0.4, 0.0), RegionError);    // ov == 0
    CHECK_THROWS_AS(saturation_resistance(n, 0.3, 0.0), RegionError);
    CHECK_THROWS_AS(effective_on_resistance(n, 0.0, 0.0), RegionError);
    // just past threshold works
    CHECK(linear_resistance(n, 0.41, 0.0) > 0.0);
}

TEST_CASE("capacitive reactance is negative and scales as 1/f") {
    CHECK(close(equivalent_reactance(10e-15, 1e9), -15915.494309189533));
    CHECK(close(equivalent_reactance(20e-15, 1e9), -7957.7471545947665));
    for (double f : {5e5, 1e7, 1e9, 4e9}) {
        double x = equivalent_reactance(10e-15, f);
        CHECK(x < 0.0);
        CHECK(close(equivalent_reactance(10e-15, 2.0 * f), x / 2.0));
    }
    CHECK_THROWS_AS(equivalent_reactance(10e-15, 0.0), DomainError);
    CHECK_THROWS_AS(equivalent_reactance(0.0, 1e9), DomainError);
}

TEST_CASE("active impedance composes on-resistance with both junction caps") {
    NandGateModel m = model_at(1e9);
    ComplexImpedance z = active_impedance(m.nmos, m.bias);
    CHECK(z.resistance == effective_on_resistance(m.nmos, m.bias.v_d, m.bias.v_s));
    CHECK(z.reactance == equivalent_reactance(m.nmos.c_gd + m.nmos.c_db, 1e9));
}

TEST_CASE("parallel combination matches the complex product over sum") {
    ComplexImpedance p = parallel({3, 4}, {3, -4});
    CHECK(close(p.resistance, 4.166666666666667));
    CHECK(p.reactance == 0.0);

    // two equal resistors halve
    ComplexImpedance h = parallel({100, 0}, {100, 0});
    CHECK(close(h.resistance, 50.0));
    CHECK(h.reactance == 0.0);

    // bitwise commutative
    ComplexImpedance a{123.25, -77.5}, b{19.75, 5.125};
    ComplexImpedance ab = parallel(a, b), ba = parallel(b, a);
    CHECK(ab.resistance == ba.resistance);
    CHECK(ab.reactance == ba.reactance);

    CHECK_THROWS_AS(parallel({1, 2}, {-1, -2}), SingularCombinationError);
}

TEST_CASE("nand case impedances match the frozen evaluation at 1 GHz") {
    NandGateModel m = model_at(1e9);
    ComplexImpedance z00 = nand_impedance(m, 0, 0);
    ComplexImpedance z01 = nand_impedance(m, 0, 1);
    ComplexImpedance z10 = nand_impedance(m, 1, 0);
    ComplexImpedance z11 = nand_impedance(m, 1, 1);
    CHECK(close(z00.resistance, 2133.9899456242947));
    CHECK(close(z00.reactance, -39346.63870882968));
    CHECK(close(z01.resistance, 4442.204995638002));
    CHECK(close(z01.reactance, -34958.07129458705));
    CHECK(close(z10.resistance, 4267.979891248589));
    CHECK(close(z10.reactance, -43325.512286127065));
    CHECK(close(z11.resistance, 1.3499396676472104e+58));
    CHECK(close(z11.reactance, -11061.885087947056));
}

TEST_CASE("both-inputs-high is dominated by the cutoff pull-up") {
    NandGateModel m = model_at(1e9);
    double m00 = nand_impedance(m, 0, 0).magnitude();
    double m01 = nand_impedance(m, 0, 1).magnitude();
    double m10 = nand_impedance(m, 1, 0).magnitude();
    double m11 = nand_impedance(m, 1, 1).magnitude();
    CHECK(m11 > 1e6 * m00);
    CHECK(m11 > 1e6 * m01);
    CHECK(m11 > 1e6 * m10);
}

TEST_CASE("the four input cases are pairwise distinct in magnitude") {
    NandGateModel m = model_at(1e9);
    double mag[4];
    int k = 0;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) mag[k++] = nand_impedance(m, a, b).magnitude();
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            double gap = std::abs(mag[i] - mag[j]) / std::max(mag[i], mag[j]);
            CHECK(gap > 1e-6);
        }
}

TEST_CASE("mixed input cases share an identical pull-up term") {
    NandGateModel m = model_at(1e9);
    NandCaseParts p01 = nand_parts(m, 0, 1);
    NandCaseParts p10 = nand_parts(m, 1, 0);
    // one input low in both cases: the parallel pull-up pair is the same
    // on/cutoff combination, so the term must agree bit for bit
    CHECK(p01.pull_up.resistance == p10.pull_up.resistance);
    CHECK(p01.pull_up.reactance == p10.pull_up.reactance);
    // but the stacked pull-downs differ (order in the stack matters)
    CHECK(p01.pull_down.resistance != p10.pull_down.resistance);
}

TEST_CASE("case evaluation is bitwise pure") {
    NandGateModel m = model_at(7.77e8);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            ComplexImpedance first = nand_impedance(m, a, b);
            ComplexImpedance second = nand_impedance(m, a, b);
            CHECK(first.resistance == second.resistance);
            CHECK(first.reactance == second.reactance);
        }
}

TEST_CASE("parts always re-compose to the reported total") {
    for (double f : {5e5, 3.3e7, 1e9, 4e9}) {
        NandGateModel m = model_at(f);
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                NandCaseParts parts = nand_parts(m, a, b);
                ComplexImpedance total = nand_impedance(m, a, b);
                CHECK(parts.total().resistance == total.resistance);
                CHECK(parts.total().reactance == total.reactance);
            }
    }
}
