#include "ohmscope/featsel.hpp"

#include <algorithm>
#include <cmath>

#include "ohmscope/errors.hpp"
#include "ohmscope/linalg.hpp"

namespace ohmscope {

LabeledDataset magnitudes(const std::vector<TraceRecord>& traces) {
    LabeledDataset ds;
    if (traces.empty()) throw DatasetError("magnitudes: no traces");
    ds.grid = traces.front().grid;
    Isa isa = traces.front().label.isa;

    for (const TraceRecord& rec : traces) {
        if (!(rec.grid == ds.grid)) throw DatasetError("magnitudes: inconsistent grids");
        if (rec.label.isa != isa) throw DatasetError("magnitudes: mixed instruction sets");
        if (rec.samples.size() != static_cast<std::size_t>(ds.grid.points))
            throw DatasetError("magnitudes: sample count does not match grid");

        auto it = std::find(ds.class_names.begin(), ds.class_names.end(), rec.label.mnemonic);
        int label;
        if (it == ds.class_names.end()) {
            label = static_cast<int>(ds.class_names.size());
            ds.class_names.push_back(rec.label.mnemonic);
        } else {
            label = static_cast<int>(it - ds.class_names.begin());
        }

        std::vector<double> row(rec.samples.size());
        for (std::size_t i = 0; i < row.size(); ++i) row[i] = rec.samples[i].magnitude();
        ds.magnitudes.push_back(std::move(row));
        ds.labels.push_back(label);
    }
    return ds;
}

namespace {

// Correlation from raw accumulated sums, shared by the vector interface and
// the screening fast path.
double pearson_from_sums(double n, double sx, double sy, double sxx, double syy, double sxy) {
    double vx = n * sxx - sx * sx;
    double vy = n * syy - sy * sy;
    if (vx <= 0.0 || vy <= 0.0)
        throw UndefinedCorrelationError("pearson: zero variance argument");
    return (n * sxy - sx * sy) / std::sqrt(vx * vy);
}

}  // namespace

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw DomainError("pearson: length mismatch");
    if (x.size() < 2) throw DomainError("pearson: need at least 2 samples");
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        syy += y[i] * y[i];
        sxy += x[i] * y[i];
    }
    return pearson_from_sums(static_cast<double>(x.size()), sx, sy, sxx, syy, sxy);
}

std::vector<ScoredColumn> screen_by_label(const LabeledDataset& dataset, double tau1,
                                          ScreenMode mode) {
    if (!(tau1 >= 0.0 && tau1 < 1.0)) throw DomainError("screen_by_label: tau1 must be in [0,1)");
    std::size_t n = dataset.rows(), m = dataset.cols();
    if (n < 2) throw DatasetError("screen_by_label: need at least 2 rows");

    std::size_t classes = dataset.class_names.size();
    std::vector<double> class_count(classes, 0.0);
    for (int lab : dataset.labels) class_count[static_cast<std::size_t>(lab)] += 1.0;

    // Label-side moments are column-independent.
    double nd = static_cast<double>(n);
    double sy_int = 0, syy_int = 0;
    for (int lab : dataset.labels) {
        sy_int += lab;
        syy_int += static_cast<double>(lab) * lab;
    }

    std::vector<ScoredColumn> scored;
    scored.reserve(m);
    std::vector<double> class_sum(classes), class_sumxy(classes);
    for (std::size_t j = 0; j < m; ++j) {
        double sx = 0, sxx = 0, sxy_int = 0;
        std::fill(class_sum.begin(), class_sum.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            double x = dataset.magnitudes[i][j];
            sx += x;
            sxx += x * x;
            sxy_int += x * dataset.labels[i];
            class_sum[static_cast<std::size_t>(dataset.labels[i])] += x;
        }

        double score = 0.0;
        try {
            if (mode == ScreenMode::INTEGER_CODES) {
                score = std::abs(pearson_from_sums(nd, sx, sy_int, sxx, syy_int, sxy_int));
            } else {
                for (std::size_t c = 0; c < classes; ++c) {
                    // One-vs-rest indicator: sy = syy = class count, sxy = in-class sum.
                    double r = std::abs(pearson_from_sums(nd, sx, class_count[c], sxx,
                                                          class_count[c], class_sum[c]));
                    score = std::max(score, r);
                }
            }
        } catch (const UndefinedCorrelationError&) {
            score = 0.0;
        }
        if (score >= tau1) scored.push_back({static_cast<int>(j), score});
    }

    std::stable_sort(scored.begin(), scored.end(), [](const ScoredColumn& a, const ScoredColumn& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.column < b.column;
    });
    return scored;
}

FrequencyMask select_dominant(const LabeledDataset& dataset,
                              const std::vector<ScoredColumn>& candidates, double tau2) {
    if (!(tau2 > 0.0 && tau2 <= 1.0)) throw DomainError("select_dominant: tau2 must be in (0,1]");
    std::size_t n = dataset.rows();

    std::vector<std::vector<double>> accepted_cols;
    std::vector<ScoredColumn> accepted;
    std::vector<double> col(n);
    for (const ScoredColumn& cand : candidates) {
        for (std::size_t i = 0; i < n; ++i)
            col[i] = dataset.magnitudes[i][static_cast<std::size_t>(cand.column)];
        bool ok = true;
        for (const std::vector<double>& prev : accepted_cols) {
            double r;
            try {
                r = std::abs(pearson(col, prev));
            } catch (const UndefinedCorrelationError&) {
                r = 0.0;  // a constant column conflicts with nothing
            }
            if (r >= tau2) {
                ok = false;
                break;
            }
        }
        if (ok) {
            accepted.push_back(cand);
            accepted_cols.push_back(col);
        }
    }

    std::sort(accepted.begin(), accepted.end(),
              [](const ScoredColumn& a, const ScoredColumn& b) { return a.column < b.column; });
    FrequencyMask mask;
    for (const ScoredColumn& sc : accepted) {
        mask.selected.push_back(sc.column);
        mask.scores.push_back(sc.score);
    }
    return mask;
}

std::vector<std::vector<double>> apply_mask(const std::vector<std::vector<double>>& rows,
                                            const FrequencyMask& mask) {
    std::vector<std::vector<double>> out(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out[i].resize(mask.selected.size());
        for (std::size_t k = 0; k < mask.selected.size(); ++k) {
            std::size_t j = static_cast<std::size_t>(mask.selected[k]);
            if (j >= rows[i].size()) throw TransformError("apply_mask: column out of range");
            out[i][k] = rows[i][j];
        }
    }
    return out;
}

PcaModel pca_fit(const std::vector<std::vector<double>>& rows, double variance_target) {
    std::size_t n = rows.size();
    if (n < 2) throw FitError("pca_fit: need at least 2 rows");
    if (!(variance_target > 0.0 && variance_target <= 1.0))
        throw FitError("pca_fit: variance target must be in (0,1]");
    std::size_t m = rows[0].size();
    if (m == 0) throw FitError("pca_fit: no columns");
    for (const auto& r : rows)
        if (r.size() != m) throw FitError("pca_fit: ragged rows");

    PcaModel model;
    model.variance_target = variance_target;
    model.mean.assign(m, 0.0);
    for (const auto& r : rows)
        for (std::size_t j = 0; j < m; ++j) model.mean[j] += r[j];
    for (double& v : model.mean) v /= static_cast<double>(n);

    std::vector<std::vector<double>> cov(m, std::vector<double>(m, 0.0));
    std::vector<double> centered(m);
    for (const auto& r : rows) {
        for (std::size_t j = 0; j < m; ++j) centered[j] = r[j] - model.mean[j];
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = a; b < m; ++b) cov[a][b] += centered[a] * centered[b];
    }
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = a; b < m; ++b) {
            cov[a][b] /= static_cast<double>(n - 1);
            cov[b][a] = cov[a][b];
        }

    EigenDecomposition eig = eigen_symmetric(cov);
    double total = 0.0;
    for (double v : eig.values) total += std::max(v, 0.0);
    if (total <= 0.0) throw FitError("pca_fit: data has no variance");

    double cum = 0.0;
    std::size_t k = 0;
    while (k < eig.values.size()) {
        cum += std::max(eig.values[k], 0.0);
        ++k;
        if (cum / total >= variance_target) break;
    }

    model.explained_variance.assign(eig.values.begin(),
                                    eig.values.begin() + static_cast<std::ptrdiff_t>(k));
    model.components.assign(eig.vectors.begin(),
                            eig.vectors.begin() + static_cast<std::ptrdiff_t>(k));
    model.variance_fraction = cum / total;

    // Deterministic orientation: the entry of largest magnitude (first such
    // entry on ties) is made positive.
    for (std::vector<double>& comp : model.components) {
        std::size_t best = 0;
        for (std::size_t j = 1; j < comp.size(); ++j)
            if (std::abs(comp[j]) > std::abs(comp[best])) best = j;
        if (comp[best] < 0.0)
            for (double& v : comp) v = -v;
    }
    return model;
}

std::vector<std::vector<double>> pca_transform(const PcaModel& model,
                                               const std::vector<std::vector<double>>& rows) {
    std::size_t m = model.mean.size(), k = model.components.size();
    std::vector<std::vector<double>> out(rows.size(), std::vector<double>(k, 0.0));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m) throw TransformError("pca_transform: dimension mismatch");
        for (std::size_t c = 0; c < k; ++c) {
            double s = 0.0;
            for (std::size_t j = 0; j < m; ++j)
                s += (rows[i][j] - model.mean[j]) * model.components[c][j];
            out[i][c] = s;
        }
    }
    return out;
}

}  // namespace ohmscope
