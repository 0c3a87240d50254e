#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "ohmscope/errors.hpp"
#include "ohmscope/impedance_model.hpp"
#include "ohmscope/isa.hpp"
#include "ohmscope/rng.hpp"
#include "ohmscope/trace_synth.hpp"

using namespace ohmscope;

namespace {

bool close(double got, double want, double rtol = 1e-12) {
    return std::abs(got - want) <= rtol * std::max(1.0, std::abs(want));
}

const InstructionSpec& spec_of(Isa isa, const std::string& mnemonic) {
    const InstructionSpec* s = find_by_mnemonic(isa, mnemonic);
    REQUIRE(s != nullptr);
    return *s;
}

FrequencyGrid small_grid() { return {5e5, 4e9, 201}; }

}  // namespace

TEST_CASE("grid is linear with exact endpoints") {
    FrequencyGrid g;  // defaults
    CHECK(g.start_hz == 5e5);
    CHECK(g.stop_hz == 4e9);
    CHECK(g.points == 10001);
    CHECK(g.frequency(0) == 5e5);
    CHECK(g.frequency(g.points - 1) == 4e9);
    // midpoint of an odd grid is the exact midpoint frequency
    FrequencyGrid h{1e9, 3e9, 3};
    CHECK(h.frequency(1) == 2e9);
    CHECK_THROWS_AS((FrequencyGrid{0.0, 1e9, 11}.validate()), DomainError);
    CHECK_THROWS_AS((FrequencyGrid{1e9, 1e9, 11}.validate()), DomainError);
    CHECK_THROWS_AS((FrequencyGrid{1e6, 1e9, 1}.validate()), DomainError);
}

TEST_CASE("profile at the first grid point matches the frozen evaluation") {
    FrequencyGrid g{5e5, 4e9, 1001};
    InstructionProfile p = build_profile(spec_of(Isa::FPGA12, "LOAD"), default_nand_model(), g);
    CHECK(close(p.base[0].resistance, 1000.0999489495919));
    CHECK(close(p.base[0].reactance, -0.5216976018203573));

    FrequencyGrid exact_1g{1e9, 4e9, 2};
    InstructionProfile q =
        build_profile(spec_of(Isa::FPGA12, "LOAD"), default_nand_model(), exact_1g);
    CHECK(close(q.base[0].resistance, 955.4822788656562));
    CHECK(close(q.base[0].reactance, -142.20494483932046));
}

TEST_CASE("profile equals the hand-composed network at 500 kHz") {
    FrequencyGrid g = small_grid();
    ProfileMapping map;
    const InstructionSpec& load = spec_of(Isa::FPGA12, "LOAD");
    InstructionProfile p = build_profile(load, default_nand_model(), g, map);

    double f = g.frequency(0);
    double w = 2.0 * std::numbers::pi * f;
    NandGateModel m = default_nand_model();
    m.bias.frequency = f;
    uint8_t pattern = load.opcode_value ^ map.fpga12_mask;

    std::complex<double> y(1.0 / map.termination_resistance, 0.0);
    for (int k = 0; k < 4; ++k) {
        int v = (pattern >> (2 * k)) & 3;
        std::complex<double> z_case = nand_impedance(m, (v >> 1) & 1, v & 1).to_complex();
        std::complex<double> branch =
            std::complex<double>(0.0, w * map.branch_inductance_h[static_cast<std::size_t>(k)]) +
            z_case / map.branch_widths[static_cast<std::size_t>(k)];
        y += 1.0 / branch;
    }
    std::complex<double> want =
        std::complex<double>(map.pdn_resistance, -1.0 / (w * map.pdn_capacitance)) + 1.0 / y;

    CHECK(close(p.base[0].resistance, want.real()));
    CHECK(close(p.base[0].reactance, want.imag()));
}

TEST_CASE("identical opcode bit patterns give identical profiles") {
    FrequencyGrid g = small_grid();
    ProfileMapping silent;
    silent.zero_signal = true;  // every instruction collapses to pattern 0
    InstructionProfile a =
        build_profile(spec_of(Isa::FPGA12, "ADD"), default_nand_model(), g, silent);
    InstructionProfile b =
        build_profile(spec_of(Isa::FPGA12, "SUB"), default_nand_model(), g, silent);
    REQUIRE(a.base.size() == b.base.size());
    for (std::size_t i = 0; i < a.base.size(); ++i) {
        CHECK(a.base[i].resistance == b.base[i].resistance);
        CHECK(a.base[i].reactance == b.base[i].reactance);
    }
}

TEST_CASE("distinct opcodes separate at most grid points") {
    FrequencyGrid g = small_grid();
    InstructionProfile add = build_profile(spec_of(Isa::FPGA12, "ADD"), default_nand_model(), g);
    InstructionProfile sub = build_profile(spec_of(Isa::FPGA12, "SUB"), default_nand_model(), g);
    int differ = 0;
    for (std::size_t i = 0; i < add.base.size(); ++i)
        if (add.base[i].magnitude() != sub.base[i].magnitude()) ++differ;
    CHECK(differ * 2 > g.points);
}

TEST_CASE("every class pair separates somewhere on the grid") {
    FrequencyGrid g = small_grid();
    for (Isa isa : {Isa::FPGA12, Isa::ATMEGA}) {
        ClassProfiles cp = build_class_profiles(isa, default_nand_model(), g);
        CHECK(cp.class_names == dataset_class_names(isa));
        REQUIRE(cp.profiles.size() == cp.class_names.size());
        for (std::size_t i = 0; i < cp.profiles.size(); ++i)
            for (std::size_t j = i + 1; j < cp.profiles.size(); ++j) {
                double best = 0.0;
                for (std::size_t k = 0; k < cp.profiles[i].base.size(); ++k) {
                    double a = cp.profiles[i].base[k].magnitude();
                    double b = cp.profiles[j].base[k].magnitude();
                    best = std::max(best, std::abs(a - b) / std::max(a, b));
                }
                CHECK(best > 1e-6);
            }
    }
}

TEST_CASE("default sigma is two percent of the pooled median magnitude") {
    FrequencyGrid g{5e5, 4e9, 11};
    ClassProfiles cp = build_class_profiles(Isa::FPGA12, default_nand_model(), g);
    std::vector<double> mags;
    for (const auto& p : cp.profiles)
        for (const auto& z : p.base) mags.push_back(z.magnitude());
    std::sort(mags.begin(), mags.end());
    std::size_t n = mags.size();
    double median =
        n % 2 == 1 ? mags[n / 2] : 0.5 * (mags[n / 2 - 1] + mags[n / 2]);
    CHECK(default_sigma(cp) == 0.02 * median);
    CHECK(default_sigma(cp) > 0.0);
}

TEST_CASE("zero sigma reproduces the base exactly") {
    FrequencyGrid g = small_grid();
    InstructionProfile p = build_profile(spec_of(Isa::FPGA12, "XOR"), default_nand_model(), g);
    auto traces = synthesize(p, NoiseModel{0.0, 42}, 3);
    REQUIRE(traces.size() == 3);
    for (int t = 0; t < 3; ++t) {
        CHECK(traces[static_cast<std::size_t>(t)].trace_id == t);
        CHECK(traces[static_cast<std::size_t>(t)].samples.size() == p.base.size());
        for (std::size_t i = 0; i < p.base.size(); ++i) {
            CHECK(traces[static_cast<std::size_t>(t)].samples[i].resistance == p.base[i].resistance);
            CHECK(traces[static_cast<std::size_t>(t)].samples[i].reactance == p.base[i].reactance);
        }
    }
}

TEST_CASE("same seed gives bitwise-identical traces, new seed moves them") {
    FrequencyGrid g{5e5, 4e9, 41};
    InstructionProfile p = build_profile(spec_of(Isa::ATMEGA, "MOV"), default_nand_model(), g);
    auto first = synthesize(p, NoiseModel{2.0, 1234}, 4);
    auto second = synthesize(p, NoiseModel{2.0, 1234}, 4);
    auto other = synthesize(p, NoiseModel{2.0, 1235}, 4);
    for (std::size_t t = 0; t < 4; ++t)
        for (std::size_t i = 0; i < p.base.size(); ++i) {
            CHECK(first[t].samples[i].resistance == second[t].samples[i].resistance);
            CHECK(first[t].samples[i].reactance == second[t].samples[i].reactance);
        }
    bool any_differ = false;
    for (std::size_t i = 0; i < p.base.size(); ++i)
        any_differ = any_differ || first[0].samples[i].resistance != other[0].samples[i].resistance;
    CHECK(any_differ);
}

TEST_CASE("a trace does not depend on how many siblings were drawn") {
    FrequencyGrid g{5e5, 4e9, 41};
    InstructionProfile p = build_profile(spec_of(Isa::FPGA12, "OR"), default_nand_model(), g);
    auto four = synthesize(p, NoiseModel{1.5, 99}, 4);
    auto seven = synthesize(p, NoiseModel{1.5, 99}, 7);
    for (std::size_t i = 0; i < p.base.size(); ++i) {
        CHECK(four[3].samples[i].resistance == seven[3].samples[i].resistance);
        CHECK(four[3].samples[i].reactance == seven[3].samples[i].reactance);
    }
}

TEST_CASE("sample means converge to the base at the Gaussian rate") {
    FrequencyGrid g{5e5, 4e9, 101};
    InstructionProfile p = build_profile(spec_of(Isa::FPGA12, "AND"), default_nand_model(), g);
    const int n = 1000;
    auto traces = synthesize(p, NoiseModel{1.0, 777}, n);
    int within = 0;
    double bound = 3.0 / std::sqrt(static_cast<double>(n));
    for (int i = 0; i < g.points; ++i) {
        double mean = 0.0;
        for (const auto& t : traces) mean += t.samples[static_cast<std::size_t>(i)].resistance;
        mean /= n;
        if (std::abs(mean - p.base[static_cast<std::size_t>(i)].resistance) <= bound) ++within;
    }
    CHECK(within >= 99);  // >= 99% of 101 points
}

TEST_CASE("per-frequency noise marginals look Gaussian") {
    FrequencyGrid g{5e5, 4e9, 201};
    InstructionProfile p = build_profile(spec_of(Isa::FPGA12, "SET"), default_nand_model(), g);
    const int n = 1000;
    const double sigma = 3.0;
    auto traces = synthesize(p, NoiseModel{sigma, 2024}, n);

    SplitMix64 pick(5150);
    for (int rep = 0; rep < 10; ++rep) {
        int col = static_cast<int>(pick.next_below(static_cast<uint64_t>(g.points)));
        std::vector<double> dev(static_cast<std::size_t>(n));
        for (int t = 0; t < n; ++t)
            dev[static_cast<std::size_t>(t)] =
                (traces[static_cast<std::size_t>(t)].samples[static_cast<std::size_t>(col)].resistance -
                 p.base[static_cast<std::size_t>(col)].resistance) /
                sigma;
        double m = 0.0;
        for (double d : dev) m += d;
        m /= n;
        double m2 = 0.0, m3 = 0.0, m4 = 0.0;
        for (double d : dev) {
            double c = d - m;
            m2 += c * c;
            m3 += c * c * c;
            m4 += c * c * c * c;
        }
        m2 /= n;
        m3 /= n;
        m4 /= n;
        double skew = m3 / std::pow(m2, 1.5);
        double excess_kurtosis = m4 / (m2 * m2) - 3.0;
        CHECK(std::abs(skew) < 0.3);
        CHECK(std::abs(excess_kurtosis) < 0.3);
        CHECK(std::abs(m) < 0.15);
        CHECK(std::abs(m2 - 1.0) < 0.15);
    }
}

TEST_CASE("class separation degrades monotonically with noise") {
    FrequencyGrid g{5e5, 4e9, 31};
    ClassProfiles cp = build_class_profiles(Isa::FPGA12, default_nand_model(), g);
    const InstructionProfile& add = cp.profiles[3];  // ADD
    const InstructionProfile& sub = cp.profiles[4];  // SUB
    REQUIRE(add.label.mnemonic == "ADD");
    REQUIRE(sub.label.mnemonic == "SUB");

    // pick the most separating grid point of the noiseless profiles
    std::size_t best = 0;
    double best_gap = -1.0;
    for (std::size_t i = 0; i < add.base.size(); ++i) {
        double gap = std::abs(add.base[i].magnitude() - sub.base[i].magnitude());
        if (gap > best_gap) { best_gap = gap; best = i; }
    }

    double s0 = default_sigma(cp);
    double previous = 1e300;
    for (double sigma : {s0, 2.0 * s0, 4.0 * s0}) {
        auto a = synthesize(add, NoiseModel{sigma, 31337}, 200);
        auto b = synthesize(sub, NoiseModel{sigma, 41414}, 200);
        double ma = 0.0, mb = 0.0;
        for (const auto& t : a) ma += t.samples[best].magnitude();
        for (const auto& t : b) mb += t.samples[best].magnitude();
        ma /= 200.0;
        mb /= 200.0;
        double va = 0.0, vb = 0.0;
        for (const auto& t : a) va += (t.samples[best].magnitude() - ma) * (t.samples[best].magnitude() - ma);
        for (const auto& t : b) vb += (t.samples[best].magnitude() - mb) * (t.samples[best].magnitude() - mb);
        va /= 199.0;
        vb /= 199.0;
        double fisher = (ma - mb) * (ma - mb) / (va + vb);
        CHECK(fisher < previous);
        previous = fisher;
    }
}

TEST_CASE("dataset counts match the shipped per-class defaults") {
    CHECK(default_per_class(Isa::FPGA12) == 700);
    CHECK(default_per_class(Isa::ATMEGA) == 500);

    FrequencyGrid g{5e5, 4e9, 21};
    {
        LabeledDataset ds = make_dataset(Isa::FPGA12, default_nand_model(), g,
                                         default_per_class(Isa::FPGA12), NoiseModel{0.0, 1});
        CHECK(ds.rows() == 8400);
        CHECK(ds.class_names.size() == 12);
        CHECK(ds.cols() == 21);
    }
    {
        LabeledDataset ds = make_dataset(Isa::ATMEGA, default_nand_model(), g,
                                         default_per_class(Isa::ATMEGA), NoiseModel{0.0, 1});
        CHECK(ds.rows() == 5500);
        CHECK(ds.class_names.size() == 11);
    }
}

TEST_CASE("single noiseless trace per class reproduces the prototypes") {
    FrequencyGrid g{5e5, 4e9, 33};
    LabeledDataset ds = make_dataset(Isa::FPGA12, default_nand_model(), g, 1, NoiseModel{0.0, 9});
    ClassProfiles cp = build_class_profiles(Isa::FPGA12, default_nand_model(), g);
    REQUIRE(ds.rows() == 12);
    for (std::size_t c = 0; c < 12; ++c) {
        CHECK(ds.labels[c] == static_cast<int>(c));
        for (std::size_t i = 0; i < ds.cols(); ++i)
            CHECK(ds.magnitudes[c][i] == cp.profiles[c].base[i].magnitude());
    }
}

TEST_CASE("dataset rows are class-major with per-class sub-seeds") {
    FrequencyGrid g{5e5, 4e9, 17};
    NoiseModel noise{1.0, 555};
    LabeledDataset ds = make_dataset(Isa::FPGA12, default_nand_model(), g, 3, noise);
    REQUIRE(ds.rows() == 36);
    for (std::size_t r = 0; r < ds.rows(); ++r) CHECK(ds.labels[r] == static_cast<int>(r / 3));

    // row for (class 2, trace 1) must equal a direct per-class synthesis
    ClassProfiles cp = build_class_profiles(Isa::FPGA12, default_nand_model(), g);
    auto traces = synthesize(cp.profiles[2], NoiseModel{1.0, sub_seed(noise.seed, 2)}, 3);
    for (std::size_t i = 0; i < ds.cols(); ++i)
        CHECK(ds.magnitudes[2 * 3 + 1][i] == traces[1].samples[i].magnitude());
}

TEST_CASE("synthesis rejects nonsense parameters") {
    FrequencyGrid g{5e5, 4e9, 5};
    InstructionProfile p = build_profile(spec_of(Isa::FPGA12, "LOAD"), default_nand_model(), g);
    CHECK_THROWS_AS(synthesize(p, NoiseModel{-1.0, 0}, 1), DomainError);
    CHECK_THROWS_AS(synthesize(p, NoiseModel{1.0, 0}, 0), DomainError);
    CHECK_THROWS_AS(
        make_dataset(Isa::FPGA12, default_nand_model(), g, 0, NoiseModel{0.0, 1}), DomainError);
}
