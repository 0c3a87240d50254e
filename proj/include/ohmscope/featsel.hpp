#pragma once

#include <string>
#include <vector>

#include "ohmscope/trace_synth.hpp"

namespace ohmscope {

struct FrequencyMask {
    std::vector<int> selected;    // strictly increasing column indices
    std::vector<double> scores;   // label score of each selected column
};

struct PcaModel {
    std::vector<double> mean;
    std::vector<std::vector<double>> components;  // orthonormal rows
    std::vector<double> explained_variance;       // descending
    double variance_fraction = 0.0;               // achieved by the retained set
    double variance_target = 0.0;
};

enum class ScreenMode { INDICATOR_MAX, INTEGER_CODES };

struct ScoredColumn {
    int column = 0;
    double score = 0.0;
};

// |Z| per trace per grid point; class names in order of first appearance.
// Mixed grids or instruction sets across traces throw DatasetError.
LabeledDataset magnitudes(const std::vector<TraceRecord>& traces);

// Single-pass product-moment form. Zero variance in either argument throws
// UndefinedCorrelationError.
double pearson(const std::vector<double>& x, const std::vector<double>& y);

// Correlation of every column against the labels. INDICATOR_MAX scores a
// column by its best |r| against any one-vs-rest class indicator (invariant
// to class order); INTEGER_CODES correlates against the raw class index.
// Constant columns score 0, never throw. Result keeps columns with
// score >= tau1, descending score, ties broken by ascending column index.
std::vector<ScoredColumn> screen_by_label(const LabeledDataset& dataset, double tau1,
                                          ScreenMode mode = ScreenMode::INDICATOR_MAX);

// Greedy pairwise pruning in candidate order: accept a column iff its |r|
// with every accepted column stays below tau2. Output indices are sorted.
FrequencyMask select_dominant(const LabeledDataset& dataset,
                              const std::vector<ScoredColumn>& candidates, double tau2 = 0.85);

// Rows restricted to the mask columns, in mask order.
std::vector<std::vector<double>> apply_mask(const std::vector<std::vector<double>>& rows,
                                            const FrequencyMask& mask);

PcaModel pca_fit(const std::vector<std::vector<double>>& rows, double variance_target = 0.95);

std::vector<std::vector<double>> pca_transform(const PcaModel& model,
                                               const std::vector<std::vector<double>>& rows);

}  // namespace ohmscope
