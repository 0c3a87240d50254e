#pragma once

#include <string>
#include <vector>

#include "ohmscope/classify.hpp"
#include "ohmscope/config.hpp"
#include "ohmscope/featsel.hpp"

namespace ohmscope {

struct PipelineResult {
    SplitPlan plan;
    FrequencyMask mask;
    bool empty_mask = false;  // nothing passed screening; chance-level fallback
    PcaModel pca;             // meaningful only when !empty_mask
    ConfusionMatrix confusion;
    MetricsReport metrics;
    std::vector<int> predicted;  // test predictions, plan.test_indices order

    // Instrumentation: every dataset row any fit stage (screening, dominant
    // selection, PCA, CV, final training) was allowed to read. Tests assert
    // this stays disjoint from plan.test_indices.
    std::vector<int> fit_row_ids;

    // First two feature components of every row, for scatter plots.
    std::vector<std::vector<double>> projection;
};

// split -> screen -> dominant -> PCA -> CV -> train -> evaluate. All fitting
// happens on the training partition; test rows are only ever transformed and
// scored. When no column survives screening the classifiers see a single
// constant feature, which pins predictions at chance level.
PipelineResult run_pipeline(const LabeledDataset& dataset, const ExperimentConfig& config);

// metrics.txt, metrics.csv, confusion.csv, mask.txt, pca.txt, projection.csv
void write_reports(const std::string& dir, const ExperimentConfig& config,
                   const LabeledDataset& dataset, const PipelineResult& result);

// Generates per_class traces per class into the on-disk dataset layout.
void synthesize_dataset(const std::string& dir, const ExperimentConfig& config);

// Same layout, but every trace is fetched from a mock instrument at
// host:port and converted from the reflection domain.
void acquire_dataset(const std::string& dir, const ExperimentConfig& config,
                     const std::string& endpoint);

}  // namespace ohmscope
