#pragma once

#include "dtwtc/clustering.hpp"
#include "dtwtc/pca.hpp"
#include "dtwtc/svm.hpp"
#include "dtwtc/templates.hpp"
#include "dtwtc/time_series.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dtwtc {

/// Distance from one sample to every template, in template-set order.
std::vector<double> featurize(const TimeSeries& sample, const std::vector<Template>& templates,
                              const DtwParams& params, DistanceKind kind);

/// Same, across a whole dataset; parallel over samples, result independent of
/// thread count.
Matrix featurize_all(const Dataset& data, const std::vector<Template>& templates,
                     const DtwParams& params, DistanceKind kind, unsigned threads = 1);

/// Per-feature standardization from training statistics (zero-variance
/// features pass through unscaled).
struct FeatureScaler {
    std::vector<double> mean;
    std::vector<double> stddev;

    static FeatureScaler fit(const Matrix& X);
    std::vector<double> apply(const std::vector<double>& x) const;
    Matrix apply_all(const Matrix& X) const;
};

struct PipelineConfig {
    DistanceKind distance = DistanceKind::dtwsubseq;
    AveragingMethod method = AveragingMethod::dpa;
    double cut = 0.25;
    int bandwidth = 8;
    int displacement_window = 16;
    double pca_variance = 0.95;
    double svm_c = 1.0;
    int svm_epochs = 100;
    int dba_max_iters = 10;
    double dba_tol = 1e-6;
    double flat_quantile = 0.05; // 0 disables the flat-curve filter
    bool merged_static = true;   // report 4-class accuracy when labels are UCI's
    std::uint64_t seed = 0;
    unsigned threads = 1;

    DtwParams dtw_params() const { return {bandwidth, displacement_window}; }
    std::vector<std::pair<std::string, std::string>> echo() const;
};

/// Everything needed to classify new samples, plus the config that built it.
struct PipelineModel {
    std::vector<Template> templates;
    FeatureScaler scaler;
    PcaModel pca;
    SvmModel svm;
    PipelineConfig config;
    std::map<int, std::string> label_names;
};

/// Per-activity clustering stage: pairwise distances + complete-linkage cut.
/// Returned in ascending label order.
std::vector<std::pair<ClusterSet, PairwiseDistances>> cluster_activities(
    const Dataset& train, const PipelineConfig& config);

/// cluster -> build templates -> featurize -> standardize -> PCA -> SVM.
PipelineModel train_pipeline(const Dataset& train, const PipelineConfig& config);

struct ConfusionMatrix {
    std::vector<int> classes;      // row/column order
    std::vector<std::int64_t> counts; // rows = actual, cols = predicted

    std::int64_t at(std::size_t actual, std::size_t predicted) const {
        return counts[actual * classes.size() + predicted];
    }
    std::int64_t total() const;
    double accuracy() const; // trace / total
};

struct PredictionResult {
    std::vector<int> predicted;                   // one per test sample
    double accuracy = 0.0;
    ConfusionMatrix confusion;
    // Six static/dynamic UCI labels collapsed to four classes; present only
    // when the label set is exactly {0..5}.
    std::optional<double> merged_static_accuracy;
};

PredictionResult predict(const PipelineModel& model, const Dataset& test);

/// Predictions over the full test set plus, when the flat filter is enabled,
/// the same metrics restricted to the filter survivors. Both are reported so
/// results are comparable whichever set a benchmark was scored on.
struct PredictionReport {
    PredictionResult full;
    std::optional<FlatCurveReport> filter;
    std::optional<PredictionResult> filtered; // survivor subset
};

PredictionReport predict_report(const PipelineModel& model, const Dataset& test);

/// Prediction artifact: header, one "index actual predicted" line per sample,
/// confusion-matrix block(s) and accuracy lines. `extra_config` entries are
/// echoed into the header after the pipeline config.
void write_prediction_report(std::ostream& out, const PredictionReport& report,
                             const PipelineModel& model, const Dataset& test,
                             const std::vector<std::pair<std::string, std::string>>&
                                 extra_config = {});

ConfusionMatrix make_confusion(const std::vector<int>& classes,
                               const std::vector<int>& actual,
                               const std::vector<int>& predicted);

std::optional<double> merged_static_accuracy(const std::vector<int>& classes,
                                             const std::vector<int>& actual,
                                             const std::vector<int>& predicted);

// Model bundle persistence: templates.txt, pca.txt, svm.txt, config.txt in a
// directory, each opening with a version + effective-config header. Text
// round-trips are bit-exact. `extra_config` (e.g. input paths) is echoed
// alongside the pipeline config.
void save_model(const std::filesystem::path& dir, const PipelineModel& model,
                const std::vector<std::pair<std::string, std::string>>& extra_config = {});
PipelineModel load_model(const std::filesystem::path& dir);

} // namespace dtwtc
