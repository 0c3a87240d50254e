#pragma once

#include <utility>
#include <vector>

#include "ohmscope/complex_impedance.hpp"
#include "ohmscope/trace_synth.hpp"

namespace ohmscope {

// One-port reflection sweep, dimensionless real/imaginary parts per point.
struct ReflectionTrace {
    std::vector<double> t_re;
    std::vector<double> t_im;
    FrequencyGrid grid;
};

struct SweepConfig {
    FrequencyGrid grid;
    int averaging_count = 100;
    double z_ref = 50.0;
};

// R = z_ref (1 - t_re^2 - t_im^2) / ((1 - t_re)^2 + t_im^2)
// X = z_ref (2 t_im)              / ((1 - t_re)^2 + t_im^2)
// Denominator <= 1e-12 (reflection at the open-circuit pole) throws
// SingularityError naming the point index.
std::vector<ComplexImpedance> gamma_to_impedance(const ReflectionTrace& trace, double z_ref);

// Inverse map (Z - z_ref) / (Z + z_ref); |Z + z_ref| = 0 throws.
std::pair<double, double> impedance_to_gamma(const ComplexImpedance& z, double z_ref);

}  // namespace ohmscope
