#pragma once

#include <cstdint>

namespace ohmscope {

// SplitMix64 (Steele/Lea/Flood constants). Pinned generator: datasets must be
// reproducible bit-for-bit from a seed across platforms and languages, which
// rules out std::mt19937/std::normal_distribution (unspecified streams).
class SplitMix64 {
  public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // uniform in [0,1), 53-bit resolution
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // uniform in (0,1] (safe for log())
    double next_unit_open_low() {
        return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
    }

    // uniform integer in [0, n)
    uint64_t next_below(uint64_t n) { return next() % n; }

  private:
    uint64_t state_;
};

// Deterministic stream splitting: child i of stream `seed`. Used to give every
// (class, trace, frequency) its own generator so synthesis is byte-identical
// under any parallel partitioning.
inline uint64_t sub_seed(uint64_t seed, uint64_t i) {
    return SplitMix64(seed ^ (0x9E3779B97F4A7C15ull * (i + 1))).next();
}

// One Box-Muller pair from a fresh generator state.
void normal_pair(SplitMix64& g, double& z0, double& z1);

// Fisher-Yates shuffle of indices [0, n) written into `idx`.
void shuffled_indices(SplitMix64& g, std::size_t n, std::uint32_t* idx);

}  // namespace ohmscope
