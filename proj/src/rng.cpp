#include "ohmscope/rng.hpp"

#include <cmath>

namespace ohmscope {

void normal_pair(SplitMix64& g, double& z0, double& z1) {
    // u1 in (0,1] so log(u1) is finite; u2 in [0,1).
    double u1 = g.next_unit_open_low();
    double u2 = g.next_unit();
    double r = std::sqrt(-2.0 * std::log(u1));
    double t = 2.0 * M_PI * u2;
    z0 = r * std::cos(t);
    z1 = r * std::sin(t);
}

void shuffled_indices(SplitMix64& g, std::size_t n, std::uint32_t* idx) {
    for (std::size_t i = 0; i < n; ++i) idx[i] = static_cast<std::uint32_t>(i);
    for (std::size_t i = n; i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(g.next_below(i));
        std::uint32_t tmp = idx[i - 1];
        idx[i - 1] = idx[j];
        idx[j] = tmp;
    }
}

}  // namespace ohmscope
