#include "ohmscope/vna.hpp"

#include <complex>
#include <string>

#include "ohmscope/errors.hpp"

namespace ohmscope {

std::vector<ComplexImpedance> gamma_to_impedance(const ReflectionTrace& trace, double z_ref) {
    if (trace.t_re.size() != trace.t_im.size())
        throw DomainError("gamma_to_impedance: component length mismatch");
    if (!(z_ref > 0.0)) throw DomainError("gamma_to_impedance: z_ref must be > 0");

    std::vector<ComplexImpedance> out(trace.t_re.size());
    for (std::size_t m = 0; m < out.size(); ++m) {
        double re = trace.t_re[m], im = trace.t_im[m];
        double denom = (1.0 - re) * (1.0 - re) + im * im;
        if (denom <= 1e-12)
            throw SingularityError("open-circuit reflection at point " + std::to_string(m));
        out[m] = {z_ref * (1.0 - re * re - im * im) / denom, z_ref * (2.0 * im) / denom};
    }
    return out;
}

std::pair<double, double> impedance_to_gamma(const ComplexImpedance& z, double z_ref) {
    if (!(z_ref > 0.0)) throw DomainError("impedance_to_gamma: z_ref must be > 0");
    std::complex<double> zc = z.to_complex();
    std::complex<double> denom = zc + z_ref;
    if (std::abs(denom) == 0.0)
        throw SingularityError("impedance_to_gamma: z equals -z_ref");
    std::complex<double> g = (zc - z_ref) / denom;
    return {g.real(), g.imag()};
}

}  // namespace ohmscope
