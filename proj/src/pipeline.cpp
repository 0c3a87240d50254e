#include "ohmscope/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ohmscope/dataset_io.hpp"
#include "ohmscope/errors.hpp"
#include "ohmscope/rng.hpp"
#include "ohmscope/textio.hpp"
#include "ohmscope/vna.hpp"
#include "ohmscope/vna_client.hpp"

namespace fs = std::filesystem;

namespace ohmscope {

namespace {

std::vector<std::vector<double>> take_rows(const std::vector<std::vector<double>>& all,
                                           const std::vector<int>& idx) {
    std::vector<std::vector<double>> out;
    out.reserve(idx.size());
    for (int i : idx) out.push_back(all[static_cast<std::size_t>(i)]);
    return out;
}

std::vector<int> take_labels(const std::vector<int>& all, const std::vector<int>& idx) {
    std::vector<int> out;
    out.reserve(idx.size());
    for (int i : idx) out.push_back(all[static_cast<std::size_t>(i)]);
    return out;
}

// Mask columns that are constant on the training rows are useless to PCA and
// the classifiers; drop them up front.
FrequencyMask drop_constant_columns(const FrequencyMask& mask,
                                    const std::vector<std::vector<double>>& train_rows) {
    FrequencyMask kept;
    for (std::size_t k = 0; k < mask.selected.size(); ++k) {
        std::size_t j = static_cast<std::size_t>(mask.selected[k]);
        double first = train_rows[0][j];
        bool constant = true;
        for (const auto& r : train_rows)
            if (r[j] != first) {
                constant = false;
                break;
            }
        if (constant) {
            log_warning("pipeline: dropping zero-variance column " +
                        std::to_string(mask.selected[k]));
            continue;
        }
        kept.selected.push_back(mask.selected[k]);
        kept.scores.push_back(mask.scores[k]);
    }
    return kept;
}

}  // namespace

PipelineResult run_pipeline(const LabeledDataset& dataset, const ExperimentConfig& config) {
    if (dataset.rows() == 0) throw DatasetError("run_pipeline: empty dataset");
    int classes = static_cast<int>(dataset.class_names.size());
    for (int lab : dataset.labels)
        if (lab < 0 || lab >= classes) throw DatasetError("run_pipeline: label out of range");

    PipelineResult result;
    result.plan = split(dataset.labels, config.test_fraction, config.split_seed);
    result.fit_row_ids = result.plan.train_indices;

    LabeledDataset train_ds;
    train_ds.grid = dataset.grid;
    train_ds.class_names = dataset.class_names;
    train_ds.magnitudes = take_rows(dataset.magnitudes, result.plan.train_indices);
    train_ds.labels = take_labels(dataset.labels, result.plan.train_indices);

    std::vector<ScoredColumn> candidates =
        screen_by_label(train_ds, config.tau1, config.screen_mode);
    result.mask = select_dominant(train_ds, candidates, config.tau2);
    result.mask = drop_constant_columns(result.mask, train_ds.magnitudes);
    result.empty_mask = result.mask.selected.empty();

    std::vector<std::vector<double>> features_train, features_all;
    if (result.empty_mask) {
        log_warning(
            "pipeline: no frequency passed screening; training on a constant feature "
            "(expect chance-level accuracy)");
        features_train.assign(train_ds.magnitudes.size(), std::vector<double>(1, 0.0));
        features_all.assign(dataset.rows(), std::vector<double>(1, 0.0));
    } else {
        result.pca =
            pca_fit(apply_mask(train_ds.magnitudes, result.mask), config.variance_target);
        features_train = pca_transform(result.pca, apply_mask(train_ds.magnitudes, result.mask));
        features_all = pca_transform(result.pca, apply_mask(dataset.magnitudes, result.mask));
    }

    Hyperparams hyper = config.hyperparams();
    FoldPlan folds = make_folds(train_ds.labels, config.folds, config.folds_seed);
    double validation =
        cross_validate(config.classifier, features_train, train_ds.labels, folds, hyper);

    Classifier model = train(config.classifier, features_train, train_ds.labels, hyper);

    std::vector<std::vector<double>> features_test =
        take_rows(features_all, result.plan.test_indices);
    std::vector<int> test_labels = take_labels(dataset.labels, result.plan.test_indices);
    result.predicted = predict(model, features_test);

    auto [cm, metrics] = evaluate(test_labels, result.predicted, classes);
    metrics.validation_score = validation;
    result.confusion = std::move(cm);
    result.metrics = metrics;

    result.projection.assign(dataset.rows(), std::vector<double>(2, 0.0));
    for (std::size_t i = 0; i < features_all.size(); ++i) {
        if (!features_all[i].empty()) result.projection[i][0] = features_all[i][0];
        if (features_all[i].size() > 1) result.projection[i][1] = features_all[i][1];
    }
    return result;
}

void write_reports(const std::string& dir, const ExperimentConfig& config,
                   const LabeledDataset& dataset, const PipelineResult& result) {
    fs::create_directories(dir);
    auto write_file = [&](const std::string& name, const std::string& content) {
        std::ofstream out(dir + "/" + name, std::ios::binary);
        if (!out) throw IoError("cannot write " + dir + "/" + name);
        out << content;
        if (!out) throw IoError("write failed: " + dir + "/" + name);
    };
    const MetricsReport& m = result.metrics;

    {
        std::ostringstream t;
        t << "classifier = " << classifier_name(config.classifier) << "\n";
        t << "validation_score = " << format_double(m.validation_score) << "\n";
        t << "f1 = " << format_double(m.f1) << "\n";
        t << "recall = " << format_double(m.recall) << "\n";
        t << "specificity = " << format_double(m.specificity) << "\n";
        t << "precision = " << format_double(m.precision) << "\n";
        t << "accuracy = " << format_double(m.accuracy) << "\n";
        t << "overall_accuracy = " << format_double(m.overall_accuracy) << "\n";
        t << "\nclass,ppv,fdr,tpr,fnr\n";
        for (std::size_t c = 0; c < dataset.class_names.size(); ++c) {
            t << dataset.class_names[c] << ',' << format_double(m.per_class_ppv[c]) << ','
              << format_double(m.per_class_fdr[c]) << ',' << format_double(m.per_class_tpr[c])
              << ',' << format_double(m.per_class_fnr[c]) << "\n";
        }
        write_file("metrics.txt", t.str());
    }
    {
        std::ostringstream t;
        t << "classifier,validation_score,f1,recall,specificity,precision,accuracy,"
             "overall_accuracy\n";
        t << classifier_name(config.classifier) << ',' << format_double(m.validation_score) << ','
          << format_double(m.f1) << ',' << format_double(m.recall) << ','
          << format_double(m.specificity) << ',' << format_double(m.precision) << ','
          << format_double(m.accuracy) << ',' << format_double(m.overall_accuracy) << "\n";
        write_file("metrics.csv", t.str());
    }
    {
        std::ostringstream t;
        t << "label";
        for (const std::string& name : dataset.class_names) t << ',' << name;
        t << ",TPR,FNR\n";
        for (std::size_t r = 0; r < result.confusion.counts.size(); ++r) {
            t << dataset.class_names[r];
            for (long long v : result.confusion.counts[r]) t << ',' << v;
            t << ',' << format_double(m.per_class_tpr[r]) << ','
              << format_double(m.per_class_fnr[r]) << "\n";
        }
        t << "PPV";
        for (double v : m.per_class_ppv) t << ',' << format_double(v);
        t << ",,\nFDR";
        for (double v : m.per_class_fdr) t << ',' << format_double(v);
        t << ",,\n";
        write_file("confusion.csv", t.str());
    }
    {
        std::ostringstream t;
        t << "columns = " << dataset.cols() << "\n";
        t << "selected = " << result.mask.selected.size() << "\n";
        t << "index,score,frequency_hz\n";
        for (std::size_t k = 0; k < result.mask.selected.size(); ++k)
            t << result.mask.selected[k] << ',' << format_double(result.mask.scores[k]) << ','
              << format_double(dataset.grid.frequency(result.mask.selected[k])) << "\n";
        write_file("mask.txt", t.str());
    }
    {
        std::ostringstream t;
        t << "dimension = " << result.pca.mean.size() << "\n";
        t << "components = " << result.pca.components.size() << "\n";
        t << "variance_target = " << format_double(config.variance_target) << "\n";
        t << "variance_fraction = " << format_double(result.pca.variance_fraction) << "\n";
        auto line = [&t](const std::string& key, const std::vector<double>& values) {
            t << key << " = ";
            for (std::size_t i = 0; i < values.size(); ++i) {
                if (i) t << ',';
                t << format_double(values[i]);
            }
            t << "\n";
        };
        line("explained_variance", result.pca.explained_variance);
        line("mean", result.pca.mean);
        for (std::size_t c = 0; c < result.pca.components.size(); ++c)
            line("component_" + std::to_string(c), result.pca.components[c]);
        write_file("pca.txt", t.str());
    }
    {
        std::ostringstream t;
        t << "row,label,subset,pc1,pc2\n";
        std::vector<char> is_test(dataset.rows(), 0);
        for (int i : result.plan.test_indices) is_test[static_cast<std::size_t>(i)] = 1;
        for (std::size_t i = 0; i < dataset.rows(); ++i) {
            t << i << ','
              << dataset.class_names[static_cast<std::size_t>(dataset.labels[i])] << ','
              << (is_test[i] ? "test" : "train") << ','
              << format_double(result.projection[i][0]) << ','
              << format_double(result.projection[i][1]) << "\n";
        }
        write_file("projection.csv", t.str());
    }
}

void synthesize_dataset(const std::string& dir, const ExperimentConfig& config) {
    NandGateModel gate = default_nand_model();
    ClassProfiles profiles = build_class_profiles(config.isa, gate, config.grid, config.mapping);
    double sigma = config.sigma_auto ? default_sigma(profiles) : config.sigma_ohms;

    DatasetManifest manifest;
    manifest.isa = config.isa;
    manifest.grid = config.grid;
    manifest.sigma_ohms = sigma;
    manifest.dataset_seed = config.dataset_seed;
    manifest.per_class = config.per_class;
    manifest.class_names = profiles.class_names;
    manifest.source = "synthetic";

    DatasetWriter writer(dir, manifest);
    for (std::size_t c = 0; c < profiles.profiles.size(); ++c) {
        NoiseModel noise{sigma, sub_seed(config.dataset_seed, c)};
        std::vector<TraceRecord> traces = synthesize(profiles.profiles[c], noise, config.per_class);
        for (const TraceRecord& rec : traces)
            writer.add_trace(static_cast<int>(c) * config.per_class + rec.trace_id,
                             profiles.class_names[c], rec);
    }
    writer.finish();
}

void acquire_dataset(const std::string& dir, const ExperimentConfig& config,
                     const std::string& endpoint) {
    std::size_t colon = endpoint.rfind(':');
    if (colon == std::string::npos)
        throw ConfigError("endpoint must be host:port, got '" + endpoint + "'");
    std::string host = endpoint.substr(0, colon);
    long long port;
    try {
        port = parse_integer(endpoint.substr(colon + 1), "endpoint port");
    } catch (const IoError& e) {
        throw ConfigError(e.what());
    }
    if (port < 1 || port > 65535) throw ConfigError("endpoint port out of range");

    std::vector<std::string> class_names = dataset_class_names(config.isa);

    DatasetManifest manifest;
    manifest.isa = config.isa;
    manifest.grid = config.grid;
    manifest.sigma_ohms = 0.0;  // server-side noise; not knowable from here
    manifest.dataset_seed = config.dataset_seed;
    manifest.per_class = config.per_class;
    manifest.class_names = class_names;
    manifest.source = "acquired";

    SweepConfig sweep;
    sweep.grid = config.grid;
    sweep.averaging_count = config.averaging_count;

    DatasetWriter writer(dir, manifest);
    for (std::size_t c = 0; c < class_names.size(); ++c) {
        for (int rep = 0; rep < config.per_class; ++rep) {
            ReflectionTrace gamma = acquire(host, static_cast<uint16_t>(port), sweep,
                                            class_names[c]);
            TraceRecord rec;
            rec.label = {class_names[c], config.isa};
            rec.grid = config.grid;
            rec.samples = gamma_to_impedance(gamma, sweep.z_ref);
            rec.trace_id = rep;
            writer.add_trace(static_cast<int>(c) * config.per_class + rep, class_names[c], rec);
        }
    }
    writer.finish();
}

}  // namespace ohmscope
