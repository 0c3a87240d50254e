#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace ohmscope {

enum class ClassifierKind { SVM_LINEAR, SVM_QUAD, KNN, LDA, GNB };

std::string classifier_name(ClassifierKind kind);
ClassifierKind classifier_from_name(const std::string& name);  // ConfigError on unknown

struct SplitPlan {
    std::vector<int> train_indices;  // sorted ascending
    std::vector<int> test_indices;   // sorted ascending
    uint64_t seed = 0;
    double test_fraction = 0.3;
    bool stratified = true;
};

struct FoldPlan {
    std::vector<std::vector<int>> folds;  // each sorted ascending
    uint64_t seed = 0;
};

// Stratified: per class, rows are shuffled by sub_seed(seed, class) and the
// first round(test_fraction * n_c) go to test.
SplitPlan split(const std::vector<int>& labels, double test_fraction, uint64_t seed,
                bool stratified = true);

// Stratified round-robin deal after a per-class seeded shuffle. A class with
// fewer rows than k throws FoldError naming the class.
FoldPlan make_folds(const std::vector<int>& labels, int k, uint64_t seed);

struct Hyperparams {
    double svm_lambda = 1e-3;
    int svm_epochs = 200;
    uint64_t svm_seed = 0;  // shuffle stream, split per one-vs-rest machine
    int knn_k = 5;
    double lda_ridge_scale = 1e-6;    // times mean covariance diagonal
    double gnb_variance_floor = 1e-9;
};

struct LinearMachine {
    std::vector<double> weights;          // standardized features + trailing bias slot
    std::vector<double> objective_curve;  // best-so-far regularized hinge objective per epoch
};

struct Classifier {
    ClassifierKind kind = ClassifierKind::SVM_LINEAR;
    int classes = 0;
    std::size_t input_dim = 0;
    Hyperparams hyper;

    // SVM kinds: standardization of the (possibly expanded) features, then
    // one machine per class.
    std::vector<double> feature_mean;
    std::vector<double> feature_scale;
    std::vector<LinearMachine> machines;

    // KNN memorizes its training set.
    std::vector<std::vector<double>> knn_rows;
    std::vector<int> knn_labels;

    // LDA stores the linear discriminants derived from the pooled covariance.
    std::vector<std::vector<double>> lda_w;
    std::vector<double> lda_b;

    // GNB per-class per-feature Gaussians plus log priors.
    std::vector<std::vector<double>> gnb_mean;
    std::vector<std::vector<double>> gnb_var;
    std::vector<double> gnb_log_prior;
};

Classifier train(ClassifierKind kind, const std::vector<std::vector<double>>& features,
                 const std::vector<int>& labels, const Hyperparams& hyper = {});

// Ties in scores or votes resolve to the smallest class index.
std::vector<int> predict(const Classifier& model, const std::vector<std::vector<double>>& rows);

// Mean held-fold plain accuracy over the folds.
double cross_validate(ClassifierKind kind, const std::vector<std::vector<double>>& features,
                      const std::vector<int>& labels, const FoldPlan& plan,
                      const Hyperparams& hyper = {});

// All monomials of degree <= 2 over the input: x_0..x_{d-1}, then x_i*x_j
// for i <= j in lexicographic order.
std::vector<double> expand_quadratic(const std::vector<double>& row);

struct ConfusionMatrix {
    std::vector<std::vector<long long>> counts;  // [true][predicted]
    long long total = 0;
};

struct MetricsReport {
    double recall = 0;       // macro true positive rate
    double specificity = 0;  // macro true negative rate
    double precision = 0;    // macro positive predictive value
    double accuracy = 0;     // macro per-class (TP+TN)/n
    double f1 = 0;           // 2PR/(P+R) from the macro precision/recall
    double overall_accuracy = 0;  // plain fraction of correct predictions
    double validation_score = 0;  // mean 10-fold CV accuracy; filled by the caller
    std::vector<double> per_class_ppv, per_class_fdr, per_class_tpr, per_class_fnr;
};

// Degenerate 0/0 ratios are defined as 0 (warning logged); the complements
// FDR = 1-PPV and FNR = 1-TPR hold exactly regardless.
std::pair<ConfusionMatrix, MetricsReport> evaluate(const std::vector<int>& true_labels,
                                                   const std::vector<int>& predicted_labels,
                                                   int class_count);

}  // namespace ohmscope
