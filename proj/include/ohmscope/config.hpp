#pragma once

#include <cstdint>
#include <string>

#include "ohmscope/classify.hpp"
#include "ohmscope/featsel.hpp"
#include "ohmscope/isa.hpp"
#include "ohmscope/trace_synth.hpp"

namespace ohmscope {

// Everything an experiment needs, with defaults pinned to the values the
// shipped end-to-end checks run at. Seed precedence: config file, then the
// OHMSCOPE_SEED environment variable, then the defaults below.
struct ExperimentConfig {
    Isa isa = Isa::FPGA12;
    FrequencyGrid grid{5e5, 4e9, 1001};

    bool sigma_auto = true;   // sigma = auto: 2% of pooled median profile magnitude
    double sigma_ohms = 0.0;  // used when sigma_auto is false

    int per_class = 200;
    double tau1 = 0.3;
    double tau2 = 0.85;
    double variance_target = 0.95;
    ClassifierKind classifier = ClassifierKind::SVM_LINEAR;
    ScreenMode screen_mode = ScreenMode::INDICATOR_MAX;

    std::string mode = "synthetic";  // or "mock" (acquire from a server)
    std::string endpoint = "127.0.0.1:5025";
    int averaging_count = 100;

    uint64_t dataset_seed = 20251;
    uint64_t split_seed = 20252;
    uint64_t folds_seed = 20253;
    uint64_t svm_seed = 20254;

    double test_fraction = 0.3;
    int folds = 10;

    double svm_lambda = 1e-3;
    int svm_epochs = 200;
    int knn_k = 5;

    ProfileMapping mapping{};

    Hyperparams hyperparams() const;
    double resolve_sigma(const NandGateModel& gate) const;  // applies the auto rule
};

// Flat key = value lines, '#' starts a comment. Unknown keys are rejected.
ExperimentConfig parse_config_text(const std::string& text);

// parse_config_text on the file, then OHMSCOPE_SEED fills seeds the file
// left unset.
ExperimentConfig load_config(const std::string& path);

// Emits every field; parse_config_text(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& config);

}  // namespace ohmscope
