#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ohmscope/complex_impedance.hpp"
#include "ohmscope/impedance_model.hpp"
#include "ohmscope/isa.hpp"

namespace ohmscope {

// Linear sweep, endpoints inclusive. frequency(points-1) == stop_hz exactly.
struct FrequencyGrid {
    double start_hz = 5e5;
    double stop_hz = 4e9;
    int points = 10001;

    double frequency(int i) const {
        return start_hz + (stop_hz - start_hz) * static_cast<double>(i) /
                              static_cast<double>(points - 1);
    }
    void validate() const;  // throws DomainError
    bool operator==(const FrequencyGrid&) const = default;
};

struct TraceLabel {
    std::string mnemonic;
    Isa isa = Isa::FPGA12;
    bool operator==(const TraceLabel&) const = default;
};

struct InstructionProfile {
    TraceLabel label;
    FrequencyGrid grid;
    std::vector<ComplexImpedance> base;  // one per grid point
};

struct NoiseModel {
    double sigma_ohms = 0.0;  // applied independently to resistance and reactance
    uint64_t seed = 0;
};

struct TraceRecord {
    TraceLabel label;
    FrequencyGrid grid;
    std::vector<ComplexImpedance> samples;
    int trace_id = 0;
};

// How an opcode byte drives the gate model. The opcode (after the per-ISA
// mask) splits into four 2-bit pairs; pair k selects the input case of a bank
// of branch_widths[k] parallel gates reached through branch_inductance_h[k].
// All four banks and the termination resistor sit in parallel; that network
// is in series with the supply branch (pdn_resistance plus the reactance of
// pdn_capacitance).
//
// The branch inductances stagger the banks' resonances across the sweep so
// each pair position dominates a different frequency region; the unequal
// widths keep any two opcode bytes at distinct aggregate impedances; the
// termination resistor caps the low-frequency magnitude so no single
// capacitive trend swamps the variance.
struct ProfileMapping {
    std::array<double, 4> branch_widths{8.0, 4.0, 2.0, 1.0};
    std::array<double, 4> branch_inductance_h{2.4e-6, 6e-7, 3e-7, 1.5e-7};
    double termination_resistance = 1000.0;
    double pdn_resistance = 0.1;
    double pdn_capacitance = 1e-6;
    uint8_t fpga12_mask = 0x00;
    uint8_t atmega_mask = 0x80;  // strips the fixed high bit of ATMEGA opcodes
    bool zero_signal = false;    // every instruction maps to the all-zeros pattern

    uint8_t mask_for(Isa isa) const { return isa == Isa::FPGA12 ? fpga12_mask : atmega_mask; }
};

struct ClassProfiles {
    std::vector<std::string> class_names;
    std::vector<InstructionProfile> profiles;  // same order as class_names
};

// Rows = traces (class-major, trace-minor), columns = grid points, entries =
// impedance magnitude in ohms.
struct LabeledDataset {
    std::vector<std::vector<double>> magnitudes;
    std::vector<int> labels;
    std::vector<std::string> class_names;
    FrequencyGrid grid;

    std::size_t rows() const { return magnitudes.size(); }
    std::size_t cols() const { return magnitudes.empty() ? 0 : magnitudes[0].size(); }
};

InstructionProfile build_profile(const InstructionSpec& spec, const NandGateModel& gate,
                                 const FrequencyGrid& grid, const ProfileMapping& mapping = {});

// One profile per dataset class of the ISA, in dataset_class_names order.
ClassProfiles build_class_profiles(Isa isa, const NandGateModel& gate, const FrequencyGrid& grid,
                                   const ProfileMapping& mapping = {});

// 2% of the median magnitude pooled over every profile and grid point.
double default_sigma(const ClassProfiles& profiles);

// count noisy copies of the profile, trace_ids 0..count-1. Noise stream is
// split per trace and per grid point, so any (trace, point) sample is
// independent of evaluation order.
std::vector<TraceRecord> synthesize(const InstructionProfile& profile, const NoiseModel& noise,
                                    int count);

int default_per_class(Isa isa);  // 700 for FPGA12, 500 for ATMEGA

// Stacked magnitude dataset: per_class traces for each dataset class, class
// sub-seed = sub_seed(noise.seed, class_index).
LabeledDataset make_dataset(Isa isa, const NandGateModel& gate, const FrequencyGrid& grid,
                            int per_class, const NoiseModel& noise,
                            const ProfileMapping& mapping = {});

}  // namespace ohmscope
