#pragma once

#include <cmath>
#include <complex>

namespace ohmscope {

// Resistance/reactance pair in ohms. The universal sample type: model
// outputs, trace samples and converted reflection data all use it.
struct ComplexImpedance {
    double resistance = 0.0;
    double reactance = 0.0;

    double magnitude() const { return std::sqrt(resistance * resistance + reactance * reactance); }

    std::complex<double> to_complex() const { return {resistance, reactance}; }
    static ComplexImpedance from_complex(const std::complex<double>& z) {
        return {z.real(), z.imag()};
    }
};

inline bool operator==(const ComplexImpedance& a, const ComplexImpedance& b) {
    return a.resistance == b.resistance && a.reactance == b.reactance;
}

}  // namespace ohmscope
