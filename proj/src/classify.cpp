#include "ohmscope/classify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "ohmscope/errors.hpp"
#include "ohmscope/linalg.hpp"
#include "ohmscope/rng.hpp"
#include "ohmscope/textio.hpp"

namespace ohmscope {

std::string classifier_name(ClassifierKind kind) {
    switch (kind) {
        case ClassifierKind::SVM_LINEAR: return "SVM_LINEAR";
        case ClassifierKind::SVM_QUAD: return "SVM_QUAD";
        case ClassifierKind::KNN: return "KNN";
        case ClassifierKind::LDA: return "LDA";
        case ClassifierKind::GNB: return "GNB";
    }
    throw ConfigError("classifier_name: bad kind");
}

ClassifierKind classifier_from_name(const std::string& name) {
    if (name == "SVM_LINEAR") return ClassifierKind::SVM_LINEAR;
    if (name == "SVM_QUAD") return ClassifierKind::SVM_QUAD;
    if (name == "KNN") return ClassifierKind::KNN;
    if (name == "LDA") return ClassifierKind::LDA;
    if (name == "GNB") return ClassifierKind::GNB;
    throw ConfigError("unknown classifier '" + name + "'");
}

namespace {

int class_count_of(const std::vector<int>& labels) {
    int classes = 0;
    for (int lab : labels) {
        if (lab < 0) throw TrainingError("negative class label");
        classes = std::max(classes, lab + 1);
    }
    return classes;
}

std::vector<std::vector<int>> rows_by_class(const std::vector<int>& labels, int classes) {
    std::vector<std::vector<int>> by_class(static_cast<std::size_t>(classes));
    for (std::size_t i = 0; i < labels.size(); ++i)
        by_class[static_cast<std::size_t>(labels[i])].push_back(static_cast<int>(i));
    return by_class;
}

void seeded_shuffle(std::vector<int>& rows, uint64_t seed) {
    SplitMix64 gen(seed);
    for (std::size_t i = rows.size(); i > 1; --i)
        std::swap(rows[i - 1], rows[gen.next_below(i)]);
}

}  // namespace

SplitPlan split(const std::vector<int>& labels, double test_fraction, uint64_t seed,
                bool stratified) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw FoldError("split: test_fraction must be in (0,1)");
    SplitPlan plan;
    plan.seed = seed;
    plan.test_fraction = test_fraction;
    plan.stratified = stratified;

    if (stratified) {
        int classes = class_count_of(labels);
        auto by_class = rows_by_class(labels, classes);
        for (int c = 0; c < classes; ++c) {
            std::vector<int>& rows = by_class[static_cast<std::size_t>(c)];
            seeded_shuffle(rows, sub_seed(seed, static_cast<uint64_t>(c)));
            std::size_t n_test = static_cast<std::size_t>(
                std::llround(test_fraction * static_cast<double>(rows.size())));
            for (std::size_t i = 0; i < rows.size(); ++i)
                (i < n_test ? plan.test_indices : plan.train_indices).push_back(rows[i]);
        }
    } else {
        std::vector<int> rows(labels.size());
        std::iota(rows.begin(), rows.end(), 0);
        seeded_shuffle(rows, seed);
        std::size_t n_test = static_cast<std::size_t>(
            std::llround(test_fraction * static_cast<double>(rows.size())));
        for (std::size_t i = 0; i < rows.size(); ++i)
            (i < n_test ? plan.test_indices : plan.train_indices).push_back(rows[i]);
    }
    std::sort(plan.train_indices.begin(), plan.train_indices.end());
    std::sort(plan.test_indices.begin(), plan.test_indices.end());
    return plan;
}

FoldPlan make_folds(const std::vector<int>& labels, int k, uint64_t seed) {
    if (k < 2) throw FoldError("make_folds: k must be >= 2");
    FoldPlan plan;
    plan.seed = seed;
    plan.folds.assign(static_cast<std::size_t>(k), {});

    int classes = class_count_of(labels);
    auto by_class = rows_by_class(labels, classes);
    for (int c = 0; c < classes; ++c) {
        std::vector<int>& rows = by_class[static_cast<std::size_t>(c)];
        if (rows.empty()) continue;
        if (rows.size() < static_cast<std::size_t>(k))
            throw FoldError("make_folds: class " + std::to_string(c) + " has " +
                            std::to_string(rows.size()) + " rows, fewer than " +
                            std::to_string(k) + " folds");
        seeded_shuffle(rows, sub_seed(seed, static_cast<uint64_t>(c)));
        for (std::size_t i = 0; i < rows.size(); ++i)
            plan.folds[i % static_cast<std::size_t>(k)].push_back(rows[i]);
    }
    for (std::vector<int>& fold : plan.folds) std::sort(fold.begin(), fold.end());
    return plan;
}

std::vector<double> expand_quadratic(const std::vector<double>& row) {
    std::size_t d = row.size();
    std::vector<double> out;
    out.reserve(d + d * (d + 1) / 2);
    out.insert(out.end(), row.begin(), row.end());
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i; j < d; ++j) out.push_back(row[i] * row[j]);
    return out;
}

namespace {

struct Standardization {
    std::vector<double> mean;
    std::vector<double> scale;
};

Standardization fit_standardization(const std::vector<std::vector<double>>& rows) {
    std::size_t n = rows.size(), d = rows[0].size();
    Standardization st;
    st.mean.assign(d, 0.0);
    st.scale.assign(d, 0.0);
    for (const auto& r : rows)
        for (std::size_t j = 0; j < d; ++j) st.mean[j] += r[j];
    for (double& v : st.mean) v /= static_cast<double>(n);
    for (const auto& r : rows)
        for (std::size_t j = 0; j < d; ++j) {
            double c = r[j] - st.mean[j];
            st.scale[j] += c * c;
        }
    for (double& v : st.scale) {
        v = std::sqrt(v / static_cast<double>(n));
        if (v < 1e-12) v = 1.0;  // constant feature: centered value is already 0
    }
    return st;
}

// Standardize and append the constant bias feature.
std::vector<double> standardized_row(const Standardization& st, const std::vector<double>& row) {
    std::vector<double> out(row.size() + 1);
    for (std::size_t j = 0; j < row.size(); ++j) out[j] = (row[j] - st.mean[j]) / st.scale[j];
    out[row.size()] = 1.0;
    return out;
}

double hinge_objective(const std::vector<double>& w, const std::vector<std::vector<double>>& x,
                       const std::vector<double>& y, double lambda) {
    double norm2 = 0.0;
    for (double v : w) norm2 += v * v;
    double hinge = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double margin = 0.0;
        for (std::size_t j = 0; j < w.size(); ++j) margin += w[j] * x[i][j];
        hinge += std::max(0.0, 1.0 - y[i] * margin);
    }
    return 0.5 * lambda * norm2 + hinge / static_cast<double>(x.size());
}

// Pegasos-style epoch subgradient descent with a global step counter and a
// best-iterate snapshot taken at epoch granularity.
LinearMachine train_machine(const std::vector<std::vector<double>>& x, const std::vector<double>& y,
                            double lambda, int epochs, uint64_t shuffle_seed) {
    std::size_t n = x.size(), d = x[0].size();
    LinearMachine machine;
    std::vector<double> w(d, 0.0), best_w(d, 0.0);
    double best_obj = hinge_objective(w, x, y, lambda);

    SplitMix64 shuffle_gen(shuffle_seed);
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);

    long long t = 0;
    for (int epoch = 0; epoch < epochs; ++epoch) {
        for (std::size_t i = n; i > 1; --i)
            std::swap(order[i - 1], order[shuffle_gen.next_below(i)]);
        for (int idx : order) {
            const std::vector<double>& xi = x[static_cast<std::size_t>(idx)];
            double yi = y[static_cast<std::size_t>(idx)];
            ++t;
            double eta = 1.0 / (lambda * static_cast<double>(t));
            double margin = 0.0;
            for (std::size_t j = 0; j < d; ++j) margin += w[j] * xi[j];
            double decay = 1.0 - eta * lambda;
            if (yi * margin < 1.0) {
                for (std::size_t j = 0; j < d; ++j) w[j] = decay * w[j] + eta * yi * xi[j];
            } else {
                for (std::size_t j = 0; j < d; ++j) w[j] *= decay;
            }
        }
        double obj = hinge_objective(w, x, y, lambda);
        if (obj < best_obj) {
            best_obj = obj;
            best_w = w;
        }
        machine.objective_curve.push_back(best_obj);
    }
    machine.weights = std::move(best_w);
    return machine;
}

int argmax_score(const std::vector<double>& scores) {
    int best = 0;
    for (std::size_t c = 1; c < scores.size(); ++c)
        if (scores[c] > scores[static_cast<std::size_t>(best)]) best = static_cast<int>(c);
    return best;
}

}  // namespace

Classifier train(ClassifierKind kind, const std::vector<std::vector<double>>& features,
                 const std::vector<int>& labels, const Hyperparams& hyper) {
    if (features.empty() || features.size() != labels.size())
        throw TrainingError("train: features/labels size mismatch");
    std::size_t d = features[0].size();
    if (d == 0) throw TrainingError("train: empty feature rows");
    for (const auto& r : features) {
        if (r.size() != d) throw TrainingError("train: ragged feature rows");
        for (double v : r)
            if (!std::isfinite(v)) throw TrainingError("train: non-finite feature value");
    }
    int classes = class_count_of(labels);
    int distinct = 0;
    {
        std::vector<char> seen(static_cast<std::size_t>(classes), 0);
        for (int lab : labels) seen[static_cast<std::size_t>(lab)] = 1;
        for (char s : seen) distinct += s;
    }
    if (distinct < 2) throw TrainingError("train: need at least 2 classes present");

    Classifier model;
    model.kind = kind;
    model.classes = classes;
    model.input_dim = d;
    model.hyper = hyper;

    switch (kind) {
        case ClassifierKind::SVM_LINEAR:
        case ClassifierKind::SVM_QUAD: {
            std::vector<std::vector<double>> expanded;
            const std::vector<std::vector<double>>* rows = &features;
            if (kind == ClassifierKind::SVM_QUAD) {
                expanded.reserve(features.size());
                for (const auto& r : features) expanded.push_back(expand_quadratic(r));
                rows = &expanded;
            }
            Standardization st = fit_standardization(*rows);
            model.feature_mean = st.mean;
            model.feature_scale = st.scale;
            std::vector<std::vector<double>> x;
            x.reserve(rows->size());
            for (const auto& r : *rows) x.push_back(standardized_row(st, r));

            std::vector<double> y(labels.size());
            for (int c = 0; c < classes; ++c) {
                for (std::size_t i = 0; i < labels.size(); ++i)
                    y[i] = labels[i] == c ? 1.0 : -1.0;
                model.machines.push_back(train_machine(x, y, hyper.svm_lambda, hyper.svm_epochs,
                                                       sub_seed(hyper.svm_seed,
                                                                static_cast<uint64_t>(c))));
            }
            break;
        }
        case ClassifierKind::KNN:
            if (hyper.knn_k < 1) throw TrainingError("train: knn_k must be >= 1");
            model.knn_rows = features;
            model.knn_labels = labels;
            break;
        case ClassifierKind::LDA: {
            std::size_t n = features.size();
            if (n <= static_cast<std::size_t>(classes))
                throw TrainingError("train: LDA needs more rows than classes");
            auto by_class = rows_by_class(labels, classes);
            std::vector<std::vector<double>> means(static_cast<std::size_t>(classes),
                                                   std::vector<double>(d, 0.0));
            for (int c = 0; c < classes; ++c) {
                const auto& rows = by_class[static_cast<std::size_t>(c)];
                if (rows.empty())
                    throw TrainingError("train: LDA class " + std::to_string(c) + " is empty");
                for (int i : rows)
                    for (std::size_t j = 0; j < d; ++j)
                        means[static_cast<std::size_t>(c)][j] += features[static_cast<std::size_t>(i)][j];
                for (double& v : means[static_cast<std::size_t>(c)])
                    v /= static_cast<double>(rows.size());
            }

            std::vector<std::vector<double>> pooled(d, std::vector<double>(d, 0.0));
            std::vector<double> centered(d);
            for (std::size_t i = 0; i < n; ++i) {
                const auto& mu = means[static_cast<std::size_t>(labels[i])];
                for (std::size_t j = 0; j < d; ++j) centered[j] = features[i][j] - mu[j];
                for (std::size_t a = 0; a < d; ++a)
                    for (std::size_t b = a; b < d; ++b) pooled[a][b] += centered[a] * centered[b];
            }
            double divisor = static_cast<double>(n) - static_cast<double>(classes);
            double trace = 0.0;
            for (std::size_t a = 0; a < d; ++a) {
                for (std::size_t b = a; b < d; ++b) {
                    pooled[a][b] /= divisor;
                    pooled[b][a] = pooled[a][b];
                }
                trace += pooled[a][a];
            }
            double ridge = hyper.lda_ridge_scale * trace / static_cast<double>(d);
            for (std::size_t a = 0; a < d; ++a) pooled[a][a] += ridge;

            std::vector<std::vector<double>> chol;
            try {
                chol = cholesky(pooled);
            } catch (const SingularityError& e) {
                throw TrainingError(std::string("train: pooled covariance singular: ") + e.what());
            }
            for (int c = 0; c < classes; ++c) {
                const auto& mu = means[static_cast<std::size_t>(c)];
                std::vector<double> w = cholesky_solve(chol, mu);
                double quad = std::inner_product(mu.begin(), mu.end(), w.begin(), 0.0);
                double prior = static_cast<double>(by_class[static_cast<std::size_t>(c)].size()) /
                               static_cast<double>(n);
                model.lda_w.push_back(std::move(w));
                model.lda_b.push_back(-0.5 * quad + std::log(prior));
            }
            break;
        }
        case ClassifierKind::GNB: {
            auto by_class = rows_by_class(labels, classes);
            for (int c = 0; c < classes; ++c) {
                const auto& rows = by_class[static_cast<std::size_t>(c)];
                if (rows.empty())
                    throw TrainingError("train: GNB class " + std::to_string(c) + " is empty");
                std::vector<double> mean(d, 0.0), var(d, 0.0);
                for (int i : rows)
                    for (std::size_t j = 0; j < d; ++j) mean[j] += features[static_cast<std::size_t>(i)][j];
                for (double& v : mean) v /= static_cast<double>(rows.size());
                for (int i : rows)
                    for (std::size_t j = 0; j < d; ++j) {
                        double cdev = features[static_cast<std::size_t>(i)][j] - mean[j];
                        var[j] += cdev * cdev;
                    }
                for (double& v : var) {
                    v /= static_cast<double>(rows.size());
                    v = std::max(v, hyper.gnb_variance_floor);
                }
                model.gnb_mean.push_back(std::move(mean));
                model.gnb_var.push_back(std::move(var));
                model.gnb_log_prior.push_back(std::log(static_cast<double>(rows.size()) /
                                                       static_cast<double>(features.size())));
            }
            break;
        }
    }
    return model;
}

std::vector<int> predict(const Classifier& model, const std::vector<std::vector<double>>& rows) {
    std::vector<int> out;
    out.reserve(rows.size());
    for (const auto& raw : rows) {
        if (raw.size() != model.input_dim) throw PredictionError("predict: dimension mismatch");
        switch (model.kind) {
            case ClassifierKind::SVM_LINEAR:
            case ClassifierKind::SVM_QUAD: {
                std::vector<double> r =
                    model.kind == ClassifierKind::SVM_QUAD ? expand_quadratic(raw) : raw;
                Standardization st{model.feature_mean, model.feature_scale};
                std::vector<double> x = standardized_row(st, r);
                std::vector<double> scores(static_cast<std::size_t>(model.classes));
                for (int c = 0; c < model.classes; ++c) {
                    const std::vector<double>& w = model.machines[static_cast<std::size_t>(c)].weights;
                    double s = 0.0;
                    for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * x[j];
                    scores[static_cast<std::size_t>(c)] = s;
                }
                out.push_back(argmax_score(scores));
                break;
            }
            case ClassifierKind::KNN: {
                std::vector<std::pair<double, int>> dist;
                dist.reserve(model.knn_rows.size());
                for (std::size_t i = 0; i < model.knn_rows.size(); ++i) {
                    double s = 0.0;
                    for (std::size_t j = 0; j < raw.size(); ++j) {
                        double diff = raw[j] - model.knn_rows[i][j];
                        s += diff * diff;
                    }
                    dist.emplace_back(s, static_cast<int>(i));
                }
                std::size_t k = std::min(static_cast<std::size_t>(model.hyper.knn_k), dist.size());
                std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k),
                                  dist.end());
                std::vector<int> votes(static_cast<std::size_t>(model.classes), 0);
                for (std::size_t i = 0; i < k; ++i)
                    votes[static_cast<std::size_t>(model.knn_labels[static_cast<std::size_t>(
                        dist[i].second)])]++;
                int best = 0;
                for (int c = 1; c < model.classes; ++c)
                    if (votes[static_cast<std::size_t>(c)] > votes[static_cast<std::size_t>(best)])
                        best = c;
                out.push_back(best);
                break;
            }
            case ClassifierKind::LDA: {
                std::vector<double> scores(static_cast<std::size_t>(model.classes));
                for (int c = 0; c < model.classes; ++c) {
                    const auto& w = model.lda_w[static_cast<std::size_t>(c)];
                    scores[static_cast<std::size_t>(c)] =
                        std::inner_product(raw.begin(), raw.end(), w.begin(), 0.0) +
                        model.lda_b[static_cast<std::size_t>(c)];
                }
                out.push_back(argmax_score(scores));
                break;
            }
            case ClassifierKind::GNB: {
                std::vector<double> scores(static_cast<std::size_t>(model.classes));
                for (int c = 0; c < model.classes; ++c) {
                    const auto& mu = model.gnb_mean[static_cast<std::size_t>(c)];
                    const auto& var = model.gnb_var[static_cast<std::size_t>(c)];
                    double s = model.gnb_log_prior[static_cast<std::size_t>(c)];
                    for (std::size_t j = 0; j < raw.size(); ++j) {
                        double dev = raw[j] - mu[j];
                        s += -0.5 * std::log(2.0 * std::numbers::pi * var[j]) -
                             dev * dev / (2.0 * var[j]);
                    }
                    scores[static_cast<std::size_t>(c)] = s;
                }
                out.push_back(argmax_score(scores));
                break;
            }
        }
    }
    return out;
}

double cross_validate(ClassifierKind kind, const std::vector<std::vector<double>>& features,
                      const std::vector<int>& labels, const FoldPlan& plan,
                      const Hyperparams& hyper) {
    if (plan.folds.empty()) throw FoldError("cross_validate: empty fold plan");
    double sum = 0.0;
    for (std::size_t f = 0; f < plan.folds.size(); ++f) {
        std::vector<std::vector<double>> train_rows, test_rows;
        std::vector<int> train_labels, test_labels;
        for (std::size_t g = 0; g < plan.folds.size(); ++g) {
            for (int i : plan.folds[g]) {
                if (g == f) {
                    test_rows.push_back(features[static_cast<std::size_t>(i)]);
                    test_labels.push_back(labels[static_cast<std::size_t>(i)]);
                } else {
                    train_rows.push_back(features[static_cast<std::size_t>(i)]);
                    train_labels.push_back(labels[static_cast<std::size_t>(i)]);
                }
            }
        }
        if (test_rows.empty()) throw FoldError("cross_validate: empty fold");
        Classifier model = train(kind, train_rows, train_labels, hyper);
        std::vector<int> pred = predict(model, test_rows);
        long long correct = 0;
        for (std::size_t i = 0; i < pred.size(); ++i)
            if (pred[i] == test_labels[i]) ++correct;
        sum += static_cast<double>(correct) / static_cast<double>(pred.size());
    }
    return sum / static_cast<double>(plan.folds.size());
}

std::pair<ConfusionMatrix, MetricsReport> evaluate(const std::vector<int>& true_labels,
                                                   const std::vector<int>& predicted_labels,
                                                   int class_count) {
    if (true_labels.size() != predicted_labels.size())
        throw EvaluationError("evaluate: label list length mismatch");
    if (true_labels.empty()) throw EvaluationError("evaluate: no instances");
    if (class_count < 1) throw EvaluationError("evaluate: class count must be >= 1");

    ConfusionMatrix cm;
    cm.counts.assign(static_cast<std::size_t>(class_count),
                     std::vector<long long>(static_cast<std::size_t>(class_count), 0));
    for (std::size_t i = 0; i < true_labels.size(); ++i) {
        int t = true_labels[i], p = predicted_labels[i];
        if (t < 0 || t >= class_count || p < 0 || p >= class_count)
            throw EvaluationError("evaluate: label out of range");
        cm.counts[static_cast<std::size_t>(t)][static_cast<std::size_t>(p)]++;
        cm.total++;
    }

    MetricsReport rep;
    rep.per_class_ppv.resize(static_cast<std::size_t>(class_count));
    rep.per_class_fdr.resize(static_cast<std::size_t>(class_count));
    rep.per_class_tpr.resize(static_cast<std::size_t>(class_count));
    rep.per_class_fnr.resize(static_cast<std::size_t>(class_count));

    auto ratio = [](double num, double den, const std::string& what) {
        if (den == 0.0) {
            log_warning("evaluate: " + what + " has empty denominator, reporting 0");
            return 0.0;
        }
        return num / den;
    };

    double sum_tpr = 0, sum_tnr = 0, sum_ppv = 0, sum_acc = 0;
    long long diag = 0;
    double n = static_cast<double>(cm.total);
    for (int c = 0; c < class_count; ++c) {
        long long tp = cm.counts[static_cast<std::size_t>(c)][static_cast<std::size_t>(c)];
        long long fn = 0, fp = 0;
        for (int o = 0; o < class_count; ++o) {
            if (o == c) continue;
            fn += cm.counts[static_cast<std::size_t>(c)][static_cast<std::size_t>(o)];
            fp += cm.counts[static_cast<std::size_t>(o)][static_cast<std::size_t>(c)];
        }
        long long tn = cm.total - tp - fn - fp;
        diag += tp;

        double tpr = ratio(static_cast<double>(tp), static_cast<double>(tp + fn),
                           "TPR of class " + std::to_string(c));
        double ppv = ratio(static_cast<double>(tp), static_cast<double>(tp + fp),
                           "PPV of class " + std::to_string(c));
        double tnr = ratio(static_cast<double>(tn), static_cast<double>(tn + fp),
                           "specificity of class " + std::to_string(c));

        rep.per_class_tpr[static_cast<std::size_t>(c)] = tpr;
        rep.per_class_fnr[static_cast<std::size_t>(c)] = 1.0 - tpr;
        rep.per_class_ppv[static_cast<std::size_t>(c)] = ppv;
        rep.per_class_fdr[static_cast<std::size_t>(c)] = 1.0 - ppv;
        sum_tpr += tpr;
        sum_tnr += tnr;
        sum_ppv += ppv;
        sum_acc += static_cast<double>(tp + tn) / n;
    }

    double k = static_cast<double>(class_count);
    rep.recall = sum_tpr / k;
    rep.specificity = sum_tnr / k;
    rep.precision = sum_ppv / k;
    rep.accuracy = sum_acc / k;
    rep.f1 = (rep.precision + rep.recall) == 0.0
                 ? 0.0
                 : 2.0 * rep.precision * rep.recall / (rep.precision + rep.recall);
    rep.overall_accuracy = static_cast<double>(diag) / n;
    return {cm, rep};
}

}  // namespace ohmscope
