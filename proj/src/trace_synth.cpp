#include "ohmscope/trace_synth.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "ohmscope/errors.hpp"
#include "ohmscope/rng.hpp"

namespace ohmscope {

void FrequencyGrid::validate() const {
    if (!(start_hz > 0.0)) throw DomainError("grid start must be > 0");
    if (!(stop_hz > start_hz)) throw DomainError("grid stop must exceed start");
    if (points < 2) throw DomainError("grid needs at least 2 points");
}

InstructionProfile build_profile(const InstructionSpec& spec, const NandGateModel& gate,
                                 const FrequencyGrid& grid, const ProfileMapping& mapping) {
    grid.validate();
    InstructionProfile profile;
    profile.label = {spec.mnemonic, spec.isa};
    profile.grid = grid;
    profile.base.resize(static_cast<std::size_t>(grid.points));

    uint8_t pattern =
        mapping.zero_signal ? 0 : static_cast<uint8_t>(spec.opcode_value ^ mapping.mask_for(spec.isa));

    NandGateModel model = gate;
    for (int i = 0; i < grid.points; ++i) {
        double f = grid.frequency(i);
        double w = 2.0 * std::numbers::pi * f;
        model.bias.frequency = f;

        // Four input cases, indexed by the pair value: high bit drives input
        // a, low bit drives input b.
        std::array<std::complex<double>, 4> cases;
        for (int v = 0; v < 4; ++v)
            cases[static_cast<std::size_t>(v)] =
                nand_impedance(model, (v >> 1) & 1, v & 1).to_complex();

        std::complex<double> admittance(1.0 / mapping.termination_resistance, 0.0);
        for (int k = 0; k < 4; ++k) {
            int v = (pattern >> (2 * k)) & 3;
            std::complex<double> branch =
                std::complex<double>(0.0, w * mapping.branch_inductance_h[static_cast<std::size_t>(k)]) +
                cases[static_cast<std::size_t>(v)] / mapping.branch_widths[static_cast<std::size_t>(k)];
            admittance += 1.0 / branch;
        }

        std::complex<double> supply(mapping.pdn_resistance, -1.0 / (w * mapping.pdn_capacitance));
        profile.base[static_cast<std::size_t>(i)] =
            ComplexImpedance::from_complex(supply + 1.0 / admittance);
    }
    return profile;
}

ClassProfiles build_class_profiles(Isa isa, const NandGateModel& gate, const FrequencyGrid& grid,
                                   const ProfileMapping& mapping) {
    ClassProfiles out;
    out.class_names = dataset_class_names(isa);
    out.profiles.reserve(out.class_names.size());
    for (const std::string& name : out.class_names) {
        const InstructionSpec* spec = find_by_mnemonic(isa, name);
        out.profiles.push_back(build_profile(*spec, gate, grid, mapping));
    }
    return out;
}

double default_sigma(const ClassProfiles& profiles) {
    std::vector<double> mags;
    for (const InstructionProfile& p : profiles.profiles)
        for (const ComplexImpedance& z : p.base) mags.push_back(z.magnitude());
    if (mags.empty()) throw DomainError("default_sigma: no profiles");
    std::size_t n = mags.size();
    std::size_t hi = n / 2;
    std::nth_element(mags.begin(), mags.begin() + static_cast<std::ptrdiff_t>(hi), mags.end());
    double median = mags[hi];
    if (n % 2 == 0) {
        std::nth_element(mags.begin(), mags.begin() + static_cast<std::ptrdiff_t>(hi - 1),
                         mags.begin() + static_cast<std::ptrdiff_t>(hi));
        median = 0.5 * (median + mags[hi - 1]);
    }
    return 0.02 * median;
}

std::vector<TraceRecord> synthesize(const InstructionProfile& profile, const NoiseModel& noise,
                                    int count) {
    if (count < 1) throw DomainError("synthesize: count must be >= 1");
    if (noise.sigma_ohms < 0.0) throw DomainError("synthesize: sigma must be >= 0");

    std::vector<TraceRecord> traces(static_cast<std::size_t>(count));
    std::size_t points = profile.base.size();
    for (int t = 0; t < count; ++t) {
        TraceRecord& rec = traces[static_cast<std::size_t>(t)];
        rec.label = profile.label;
        rec.grid = profile.grid;
        rec.trace_id = t;
        rec.samples.resize(points);
        if (noise.sigma_ohms == 0.0) {  // adding sigma*z would be a bit-exact no-op
            rec.samples = profile.base;
            continue;
        }
        uint64_t trace_seed = sub_seed(noise.seed, static_cast<uint64_t>(t));
        for (std::size_t i = 0; i < points; ++i) {
            SplitMix64 gen(sub_seed(trace_seed, i));
            double zr, zx;
            normal_pair(gen, zr, zx);
            rec.samples[i] = {profile.base[i].resistance + noise.sigma_ohms * zr,
                              profile.base[i].reactance + noise.sigma_ohms * zx};
        }
    }
    return traces;
}

int default_per_class(Isa isa) { return isa == Isa::FPGA12 ? 700 : 500; }

LabeledDataset make_dataset(Isa isa, const NandGateModel& gate, const FrequencyGrid& grid,
                            int per_class, const NoiseModel& noise,
                            const ProfileMapping& mapping) {
    if (per_class < 1) throw DomainError("make_dataset: per_class must be >= 1");
    ClassProfiles cp = build_class_profiles(isa, gate, grid, mapping);

    LabeledDataset ds;
    ds.class_names = cp.class_names;
    ds.grid = grid;
    std::size_t classes = cp.profiles.size();
    ds.magnitudes.reserve(classes * static_cast<std::size_t>(per_class));
    ds.labels.reserve(classes * static_cast<std::size_t>(per_class));

    for (std::size_t c = 0; c < classes; ++c) {
        NoiseModel class_noise{noise.sigma_ohms, sub_seed(noise.seed, c)};
        std::vector<TraceRecord> traces = synthesize(cp.profiles[c], class_noise, per_class);
        for (const TraceRecord& rec : traces) {
            std::vector<double> row(rec.samples.size());
            for (std::size_t i = 0; i < row.size(); ++i) row[i] = rec.samples[i].magnitude();
            ds.magnitudes.push_back(std::move(row));
            ds.labels.push_back(static_cast<int>(c));
        }
    }
    return ds;
}

}  // namespace ohmscope
