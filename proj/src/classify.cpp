#include "dtwtc/classify.hpp"

#include "dtwtc/dataset_io.hpp"
#include "dtwtc/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

namespace dtwtc {

std::vector<double> featurize(const TimeSeries& sample, const std::vector<Template>& templates,
                              const DtwParams& params, DistanceKind kind) {
    if (templates.empty()) throw DomainError("featurize: no templates");
    std::vector<double> out(templates.size());
    for (std::size_t j = 0; j < templates.size(); ++j) {
        const auto& t = templates[j].series;
        if (t.length() != sample.length() || t.dim() != sample.dim())
            throw DomainError("featurize: sample shape does not match template shape");
        out[j] = series_distance(sample, t, params, kind);
    }
    return out;
}

Matrix featurize_all(const Dataset& data, const std::vector<Template>& templates,
                     const DtwParams& params, DistanceKind kind, unsigned threads) {
    if (data.empty()) throw DomainError("featurize_all: empty dataset");
    Matrix out(data.size(), templates.size());
    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            auto row = featurize(data[i].series, templates, params, kind);
            std::copy(row.begin(), row.end(), out.v.begin() + i * out.cols);
        }
    };
    unsigned workers = threads <= 1 ? 1 : std::min<std::size_t>(threads, data.size());
    if (workers <= 1) {
        work(0, data.size());
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (data.size() + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            std::size_t begin = w * chunk;
            std::size_t end = std::min(data.size(), begin + chunk);
            if (begin < end) pool.emplace_back(work, begin, end);
        }
        for (auto& t : pool) t.join();
    }
    return out;
}

FeatureScaler FeatureScaler::fit(const Matrix& X) {
    if (X.rows == 0) throw DomainError("FeatureScaler: empty matrix");
    FeatureScaler s;
    s.mean.assign(X.cols, 0.0);
    s.stddev.assign(X.cols, 0.0);
    for (std::size_t i = 0; i < X.rows; ++i)
        for (std::size_t j = 0; j < X.cols; ++j) s.mean[j] += X.at(i, j);
    for (double& m : s.mean) m /= static_cast<double>(X.rows);
    for (std::size_t i = 0; i < X.rows; ++i)
        for (std::size_t j = 0; j < X.cols; ++j) {
            double c = X.at(i, j) - s.mean[j];
            s.stddev[j] += c * c;
        }
    for (double& v : s.stddev) {
        v = std::sqrt(v / static_cast<double>(X.rows));
        if (v == 0.0) v = 1.0;
    }
    return s;
}

std::vector<double> FeatureScaler::apply(const std::vector<double>& x) const {
    if (x.size() != mean.size()) throw DomainError("FeatureScaler: wrong feature length");
    std::vector<double> out(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) out[j] = (x[j] - mean[j]) / stddev[j];
    return out;
}

Matrix FeatureScaler::apply_all(const Matrix& X) const {
    Matrix out(X.rows, X.cols);
    for (std::size_t i = 0; i < X.rows; ++i)
        for (std::size_t j = 0; j < X.cols; ++j)
            out.at(i, j) = (X.at(i, j) - mean[j]) / stddev[j];
    return out;
}

std::vector<std::pair<std::string, std::string>> PipelineConfig::echo() const {
    return {
        {"distance", to_string(distance)},
        {"method", to_string(method)},
        {"cut", format_g17(cut)},
        {"bw", std::to_string(bandwidth)},
        {"dw", std::to_string(displacement_window)},
        {"pca-variance", format_g17(pca_variance)},
        {"svm-c", format_g17(svm_c)},
        {"epochs", std::to_string(svm_epochs)},
        {"dba-max-iters", std::to_string(dba_max_iters)},
        {"dba-tol", format_g17(dba_tol)},
        {"flat-quantile", format_g17(flat_quantile)},
        {"merged-static", merged_static ? "true" : "false"},
        {"seed", std::to_string(seed)},
        {"threads", std::to_string(threads)},
    };
}

std::vector<std::pair<ClusterSet, PairwiseDistances>> cluster_activities(
    const Dataset& train, const PipelineConfig& config) {
    if (train.empty()) throw DomainError("cluster_activities: empty dataset");
    std::vector<std::pair<ClusterSet, PairwiseDistances>> out;
    for (int label : train.label_set()) {
        std::vector<TimeSeries> members;
        for (const auto& s : train.samples())
            if (s.label == label) members.push_back(s.series);
        auto dists = pairwise_distances(members, config.dtw_params(), config.distance,
                                        config.threads);
        auto clusters = complete_linkage_cluster(dists, config.cut);
        clusters.label = label;
        out.emplace_back(std::move(clusters), std::move(dists));
    }
    return out;
}

PipelineModel train_pipeline(const Dataset& train, const PipelineConfig& config) {
    if (train.empty()) throw DomainError("train_pipeline: empty dataset");
    if (train.label_set().size() < 2)
        throw DomainError("train_pipeline: need at least 2 activities");
    for (const auto& [label, name] : train.label_names()) {
        if (!train.label_set().contains(label))
            throw DomainError("train_pipeline: declared label " + std::to_string(label) +
                              " has no samples");
    }

    // per-activity member series, in ascending label order
    std::map<int, std::vector<TimeSeries>> by_label;
    for (const auto& s : train.samples()) by_label[s.label].push_back(s.series);

    std::vector<ActivityClusters> activities;
    for (auto& [label, members] : by_label) {
        auto dists = pairwise_distances(members, config.dtw_params(), config.distance,
                                        config.threads);
        auto cs = complete_linkage_cluster(dists, config.cut);
        ActivityClusters ac;
        ac.label = label;
        for (const auto& cluster : cs.clusters) {
            std::vector<TimeSeries> series;
            series.reserve(cluster.size());
            for (int idx : cluster) series.push_back(members[static_cast<std::size_t>(idx)]);
            ac.clusters.push_back(std::move(series));
        }
        activities.push_back(std::move(ac));
    }

    PipelineModel model;
    model.config = config;
    model.label_names = train.label_names();
    model.templates = build_templates(activities, config.method, config.dtw_params(),
                                      config.seed, config.dba_max_iters, config.dba_tol);

    Matrix features = featurize_all(train, model.templates, config.dtw_params(),
                                    config.distance, config.threads);
    model.scaler = FeatureScaler::fit(features);
    Matrix scaled = model.scaler.apply_all(features);
    model.pca = fit_pca(scaled, config.pca_variance);
    Matrix projected = model.pca.project_all(scaled);

    std::vector<int> labels(train.size());
    for (std::size_t i = 0; i < train.size(); ++i) labels[i] = train[i].label;
    model.svm = fit_svm(projected, labels, config.svm_c, config.svm_epochs, config.seed);
    return model;
}

std::int64_t ConfusionMatrix::total() const {
    std::int64_t t = 0;
    for (auto c : counts) t += c;
    return t;
}

double ConfusionMatrix::accuracy() const {
    std::int64_t trace = 0;
    for (std::size_t i = 0; i < classes.size(); ++i) trace += at(i, i);
    std::int64_t tot = total();
    return tot == 0 ? 0.0 : static_cast<double>(trace) / static_cast<double>(tot);
}

ConfusionMatrix make_confusion(const std::vector<int>& classes,
                               const std::vector<int>& actual,
                               const std::vector<int>& predicted) {
    ConfusionMatrix cm;
    cm.classes = classes;
    cm.counts.assign(classes.size() * classes.size(), 0);
    auto index_of = [&](int label) {
        auto it = std::find(classes.begin(), classes.end(), label);
        if (it == classes.end())
            throw DomainError("confusion matrix: label " + std::to_string(label) +
                              " not in class list");
        return static_cast<std::size_t>(it - classes.begin());
    };
    for (std::size_t i = 0; i < actual.size(); ++i)
        ++cm.counts[index_of(actual[i]) * classes.size() + index_of(predicted[i])];
    return cm;
}

std::optional<double> merged_static_accuracy(const std::vector<int>& classes,
                                             const std::vector<int>& actual,
                                             const std::vector<int>& predicted) {
    // UCI label set only: 0..2 dynamic, 3..5 static merge into one class.
    if (std::set<int>(classes.begin(), classes.end()) != std::set<int>{0, 1, 2, 3, 4, 5})
        return std::nullopt;
    if (actual.empty()) return std::nullopt;
    auto merge = [](int l) { return l >= 3 ? 3 : l; };
    std::size_t hits = 0;
    for (std::size_t i = 0; i < actual.size(); ++i)
        if (merge(actual[i]) == merge(predicted[i])) ++hits;
    return static_cast<double>(hits) / static_cast<double>(actual.size());
}

PredictionResult predict(const PipelineModel& model, const Dataset& test) {
    if (test.empty()) throw DomainError("predict: empty test set");
    const auto& templ = model.templates.front().series;
    if (test.length() != templ.length() || test.dim() != templ.dim())
        throw DomainError("predict: test shape does not match model shape");

    Matrix features = featurize_all(test, model.templates, model.config.dtw_params(),
                                    model.config.distance, model.config.threads);
    PredictionResult result;
    result.predicted.resize(test.size());
    std::vector<int> actual(test.size());
    for (std::size_t i = 0; i < test.size(); ++i) {
        std::vector<double> row(features.row(i), features.row(i) + features.cols);
        auto projected = model.pca.project(model.scaler.apply(row));
        result.predicted[i] = model.svm.predict(projected);
        actual[i] = test[i].label;
    }

    result.confusion = make_confusion(model.svm.classes, actual, result.predicted);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < test.size(); ++i)
        if (actual[i] == result.predicted[i]) ++hits;
    result.accuracy = static_cast<double>(hits) / static_cast<double>(test.size());
    result.merged_static_accuracy =
        merged_static_accuracy(model.svm.classes, actual, result.predicted);
    return result;
}

PredictionReport predict_report(const PipelineModel& model, const Dataset& test) {
    PredictionReport report;
    report.full = predict(model, test);
    if (model.config.flat_quantile > 0.0) {
        auto [survivors_ds, fr] = remove_flat_curves(test, model.config.flat_quantile);
        report.filter = fr;

        std::vector<bool> removed(test.size(), false);
        for (std::size_t i : fr.removed) removed[i] = true;
        std::vector<int> actual, predicted;
        for (std::size_t i = 0; i < test.size(); ++i) {
            if (removed[i]) continue;
            actual.push_back(test[i].label);
            predicted.push_back(report.full.predicted[i]);
        }
        if (!actual.empty()) {
            PredictionResult sub;
            sub.predicted = predicted;
            std::size_t hits = 0;
            for (std::size_t i = 0; i < actual.size(); ++i)
                if (actual[i] == predicted[i]) ++hits;
            sub.accuracy = static_cast<double>(hits) / static_cast<double>(actual.size());
            sub.confusion = make_confusion(model.svm.classes, actual, predicted);
            sub.merged_static_accuracy =
                merged_static_accuracy(model.svm.classes, actual, predicted);
            report.filtered = std::move(sub);
        }
    }
    return report;
}

namespace {

void write_confusion_block(std::ostream& out, const std::string& tag,
                           const ConfusionMatrix& cm) {
    out << "confusion " << tag << " rows=actual cols=predicted classes";
    for (int c : cm.classes) out << ' ' << c;
    out << '\n';
    for (std::size_t i = 0; i < cm.classes.size(); ++i) {
        for (std::size_t j = 0; j < cm.classes.size(); ++j) {
            if (j) out << ' ';
            out << cm.at(i, j);
        }
        out << '\n';
    }
}

} // namespace

void write_prediction_report(std::ostream& out, const PredictionReport& report,
                             const PipelineModel& model, const Dataset& test,
                             const std::vector<std::pair<std::string, std::string>>&
                                 extra_config) {
    out << "# dtwtc predict v1\n";
    for (const auto& [k, v] : model.config.echo()) out << "# config: " << k << " = " << v << '\n';
    for (const auto& [k, v] : extra_config) out << "# config: " << k << " = " << v << '\n';
    out << "samples " << test.size() << '\n';
    for (std::size_t i = 0; i < test.size(); ++i)
        out << i << ' ' << test[i].label << ' ' << report.full.predicted[i] << '\n';

    write_confusion_block(out, "full", report.full.confusion);
    out << "accuracy full = " << format_g17(report.full.accuracy) << '\n';
    if (model.config.merged_static && report.full.merged_static_accuracy)
        out << "accuracy full merged-static = "
            << format_g17(*report.full.merged_static_accuracy) << '\n';

    if (report.filter) {
        out << "flat-filter quantile = " << format_g17(report.filter->quantile)
            << " removed = " << report.filter->removed.size() << '\n';
        if (report.filtered) {
            write_confusion_block(out, "flat-filtered", report.filtered->confusion);
            out << "accuracy flat-filtered = " << format_g17(report.filtered->accuracy) << '\n';
            if (model.config.merged_static && report.filtered->merged_static_accuracy)
                out << "accuracy flat-filtered merged-static = "
                    << format_g17(*report.filtered->merged_static_accuracy) << '\n';
        }
    }
}

// ---- persistence ----

namespace {

void require_line(std::istream& in, std::string& line, const std::string& what) {
    if (!std::getline(in, line)) throw FormatError("truncated file while reading " + what);
}

void skip_comments(std::istream& in, std::string& line, const std::string& what) {
    do {
        require_line(in, line, what);
    } while (!line.empty() && line[0] == '#');
}

std::vector<double> read_doubles(const std::string& line, std::size_t expect,
                                 const std::string& what) {
    std::istringstream ss(line);
    std::vector<double> out;
    double v;
    while (ss >> v) out.push_back(v);
    if (out.size() != expect)
        throw FormatError(what + ": expected " + std::to_string(expect) + " values, got " +
                          std::to_string(out.size()));
    return out;
}

void write_vector(std::ostream& out, const std::vector<double>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out << ' ';
        out << format_g17(v[i]);
    }
    out << '\n';
}

} // namespace

void save_model(const std::filesystem::path& dir, const PipelineModel& model,
                const std::vector<std::pair<std::string, std::string>>& extra_config) {
    std::filesystem::create_directories(dir);

    auto write_header = [&](std::ostream& out, const char* kind) {
        out << "# dtwtc " << kind << " v1\n";
        for (const auto& [k, v] : model.config.echo())
            out << "# config: " << k << " = " << v << '\n';
        for (const auto& [k, v] : extra_config) out << "# config: " << k << " = " << v << '\n';
    };

    {
        std::ofstream out(dir / "templates.txt");
        if (!out) throw FormatError("cannot write " + (dir / "templates.txt").string());
        write_header(out, "templates");
        write_template_set(out, model.templates);
    }
    {
        std::ofstream out(dir / "pca.txt");
        if (!out) throw FormatError("cannot write " + (dir / "pca.txt").string());
        write_header(out, "pca");
        out << "pca v1 features=" << model.pca.mean.size() << " retained=" << model.pca.retained
            << '\n';
        out << "scaler_mean ";
        write_vector(out, model.scaler.mean);
        out << "scaler_stddev ";
        write_vector(out, model.scaler.stddev);
        out << "mean ";
        write_vector(out, model.pca.mean);
        out << "explained ";
        write_vector(out, model.pca.explained);
        for (std::size_t r = 0; r < model.pca.retained; ++r) {
            std::vector<double> row(model.pca.components.row(r),
                                    model.pca.components.row(r) + model.pca.components.cols);
            write_vector(out, row);
        }
    }
    {
        std::ofstream out(dir / "svm.txt");
        if (!out) throw FormatError("cannot write " + (dir / "svm.txt").string());
        write_header(out, "svm");
        out << "svm v1 classes=" << model.svm.classes.size() << " dim=" << model.svm.weights.cols
            << " C=" << format_g17(model.svm.C)
            << " objective=" << format_g17(model.svm.objective) << '\n';
        for (std::size_t c = 0; c < model.svm.classes.size(); ++c) {
            out << model.svm.classes[c] << ' ' << format_g17(model.svm.bias[c]);
            for (std::size_t j = 0; j < model.svm.weights.cols; ++j)
                out << ' ' << format_g17(model.svm.weights.at(c, j));
            out << '\n';
        }
    }
    {
        std::ofstream out(dir / "config.txt");
        if (!out) throw FormatError("cannot write " + (dir / "config.txt").string());
        out << "# dtwtc config v1\n";
        for (const auto& [k, v] : model.config.echo()) out << k << " = " << v << '\n';
        for (const auto& [k, v] : extra_config) out << k << " = " << v << '\n';
        for (const auto& [label, name] : model.label_names)
            out << "label-name-" << label << " = " << name << '\n';
    }
}

PipelineModel load_model(const std::filesystem::path& dir) {
    PipelineModel model;
    {
        std::ifstream in(dir / "templates.txt");
        if (!in) throw FormatError("cannot open " + (dir / "templates.txt").string());
        model.templates = read_template_set(in);
        if (model.templates.empty()) throw FormatError("model has no templates");
    }
    {
        std::ifstream in(dir / "pca.txt");
        if (!in) throw FormatError("cannot open " + (dir / "pca.txt").string());
        std::string line;
        skip_comments(in, line, "pca header");
        std::istringstream head(line);
        std::string tag, version, kv;
        head >> tag >> version;
        if (tag != "pca" || version != "v1") throw FormatError("pca.txt: bad header");
        std::size_t features = 0, retained = 0;
        while (head >> kv) {
            auto eq = kv.find('=');
            auto key = kv.substr(0, eq);
            auto val = kv.substr(eq + 1);
            if (key == "features") features = std::stoul(val);
            if (key == "retained") retained = std::stoul(val);
        }
        auto labeled_vector = [&](const std::string& name) {
            require_line(in, line, name);
            std::istringstream ss(line);
            std::string label;
            ss >> label;
            if (label != name) throw FormatError("pca.txt: expected " + name);
            std::string rest;
            std::getline(ss, rest);
            return read_doubles(rest, features, name);
        };
        model.scaler.mean = labeled_vector("scaler_mean");
        model.scaler.stddev = labeled_vector("scaler_stddev");
        model.pca.mean = labeled_vector("mean");
        model.pca.explained = labeled_vector("explained");
        model.pca.retained = retained;
        model.pca.components = Matrix(retained, features);
        for (std::size_t r = 0; r < retained; ++r) {
            require_line(in, line, "pca component");
            auto row = read_doubles(line, features, "pca component");
            for (std::size_t j = 0; j < features; ++j) model.pca.components.at(r, j) = row[j];
        }
    }
    {
        std::ifstream in(dir / "svm.txt");
        if (!in) throw FormatError("cannot open " + (dir / "svm.txt").string());
        std::string line;
        skip_comments(in, line, "svm header");
        std::istringstream head(line);
        std::string tag, version, kv;
        head >> tag >> version;
        if (tag != "svm" || version != "v1") throw FormatError("svm.txt: bad header");
        std::size_t classes = 0, dim = 0;
        while (head >> kv) {
            auto eq = kv.find('=');
            auto key = kv.substr(0, eq);
            auto val = kv.substr(eq + 1);
            if (key == "classes") classes = std::stoul(val);
            if (key == "dim") dim = std::stoul(val);
            if (key == "C") model.svm.C = std::stod(val);
            if (key == "objective") model.svm.objective = std::stod(val);
        }
        model.svm.weights = Matrix(classes, dim);
        model.svm.bias.assign(classes, 0.0);
        for (std::size_t c = 0; c < classes; ++c) {
            require_line(in, line, "svm class row");
            std::istringstream ss(line);
            int cls;
            double bias;
            if (!(ss >> cls >> bias)) throw FormatError("svm.txt: bad class row");
            model.svm.classes.push_back(cls);
            model.svm.bias[c] = bias;
            for (std::size_t j = 0; j < dim; ++j) {
                double w;
                if (!(ss >> w)) throw FormatError("svm.txt: short weight row");
                model.svm.weights.at(c, j) = w;
            }
        }
    }
    {
        std::ifstream in(dir / "config.txt");
        if (!in) throw FormatError("cannot open " + (dir / "config.txt").string());
        std::string line;
        std::map<std::string, std::string> kv;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            auto trim = [](std::string s) {
                auto b = s.find_first_not_of(" \t");
                auto e = s.find_last_not_of(" \t");
                return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
            };
            kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
        }
        PipelineConfig& c = model.config;
        c.distance = distance_kind_from_string(kv.at("distance"));
        c.method = averaging_method_from_string(kv.at("method"));
        c.cut = std::stod(kv.at("cut"));
        c.bandwidth = std::stoi(kv.at("bw"));
        c.displacement_window = std::stoi(kv.at("dw"));
        c.pca_variance = std::stod(kv.at("pca-variance"));
        c.svm_c = std::stod(kv.at("svm-c"));
        c.svm_epochs = std::stoi(kv.at("epochs"));
        c.dba_max_iters = std::stoi(kv.at("dba-max-iters"));
        c.dba_tol = std::stod(kv.at("dba-tol"));
        c.flat_quantile = std::stod(kv.at("flat-quantile"));
        c.merged_static = kv.at("merged-static") == "true";
        c.seed = std::stoull(kv.at("seed"));
        c.threads = static_cast<unsigned>(std::stoul(kv.at("threads")));
        for (const auto& [key, val] : kv) {
            if (key.rfind("label-name-", 0) == 0)
                model.label_names[std::stoi(key.substr(11))] = val;
        }
    }
    return model;
}

} // namespace dtwtc
