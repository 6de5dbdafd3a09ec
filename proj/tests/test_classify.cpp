#include "dtwtc/classify.hpp"
#include "dtwtc/error.hpp"

#include "test_helpers.hpp"

#include <doctest.h>

#ifdef DTWTC_HAVE_EIGEN
#include <Eigen/Dense>
#endif

#include <cmath>
#include <fstream>
#include <sstream>

using namespace dtwtc;

namespace {

// two activities of lagged sinusoids, distinct frequencies
Dataset toy_dataset(Rng& rng, int per_activity, std::size_t m = 32) {
    Dataset data;
    for (int label = 0; label < 2; ++label) {
        double cycles = label == 0 ? 2.0 : 5.0;
        for (int i = 0; i < per_activity; ++i) {
            double phase = rng.uniform_real() * 2.0 * M_PI;
            std::vector<double> v(m);
            for (std::size_t t = 0; t < m; ++t)
                v[t] = std::sin(2.0 * M_PI * cycles * static_cast<double>(t) /
                                    static_cast<double>(m) +
                                phase) +
                       0.05 * rng.uniform_real();
            data.add({TimeSeries::from_scalars(std::move(v)), label, std::nullopt});
        }
    }
    return data;
}

PipelineConfig toy_config() {
    PipelineConfig c;
    c.distance = DistanceKind::dtwsubseq;
    c.method = AveragingMethod::dpa;
    c.cut = 0.5;
    c.bandwidth = 4;
    c.displacement_window = 8;
    c.pca_variance = 0.95;
    c.svm_c = 1.0;
    c.svm_epochs = 50;
    c.flat_quantile = 0.0;
    c.seed = 3;
    return c;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Template make_template(TimeSeries s, int label) {
    Template t{std::move(s), label, AveragingMethod::dpa, {}};
    t.provenance.cluster_size = 1;
    t.provenance.medoid_index = 0;
    return t;
}

} // namespace

TEST_CASE("featurize") {
    Rng rng(51);
    std::vector<Template> templates;
    for (int j = 0; j < 5; ++j)
        templates.push_back(make_template(testutil::random_series(rng, 10, 2), j % 2));
    DtwParams params{3, 4};

    SUBCASE("own template entry is zero, everything non-negative") {
        auto f = featurize(templates[3].series, templates, params, DistanceKind::dtwsubseq);
        REQUIRE(f.size() == 5);
        CHECK(f[3] == 0.0);
        for (double v : f) CHECK(v >= 0.0);
    }

    SUBCASE("single template gives a length-one vector") {
        auto f = featurize(templates[0].series, {templates[1]}, params, DistanceKind::dtw);
        CHECK(f.size() == 1);
    }

    SUBCASE("entries equal independent distance calls") {
        auto sample = testutil::random_series(rng, 10, 2);
        for (auto kind : {DistanceKind::dtw, DistanceKind::dtwsubseq}) {
            auto f = featurize(sample, templates, params, kind);
            for (std::size_t j = 0; j < templates.size(); ++j)
                CHECK(f[j] == series_distance(sample, templates[j].series, params, kind));
        }
    }

    SUBCASE("shape mismatch is rejected") {
        auto sample = testutil::random_series(rng, 12, 2);
        CHECK_THROWS_AS(featurize(sample, templates, params, DistanceKind::dtw), DomainError);
    }
}

TEST_CASE("fit_pca") {
    SUBCASE("rank-one data keeps a single component") {
        Matrix X(20, 4);
        Rng rng(52);
        for (std::size_t i = 0; i < 20; ++i) {
            double a = rng.uniform_real();
            for (std::size_t j = 0; j < 4; ++j) X.at(i, j) = a * (1.0 + static_cast<double>(j));
        }
        for (double vr : {0.5, 0.95, 1.0}) CHECK(fit_pca(X, vr).retained == 1);
    }

    SUBCASE("isotropic two-feature cloud needs both components at full retention") {
        Matrix X(4, 2);
        X.at(0, 0) = 1; X.at(0, 1) = 0;
        X.at(1, 0) = -1; X.at(1, 1) = 0;
        X.at(2, 0) = 0; X.at(2, 1) = 1;
        X.at(3, 0) = 0; X.at(3, 1) = -1;
        CHECK(fit_pca(X, 1.0).retained == 2);
    }

    SUBCASE("full-rank retention reconstructs the centered data") {
        Rng rng(53);
        Matrix X(50, 10);
        for (auto& v : X.v) v = rng.uniform_real() * 4.0 - 2.0;
        auto model = fit_pca(X, 1.0);

        // orthonormal rows
        for (std::size_t r = 0; r < model.retained; ++r)
            for (std::size_t q = r; q < model.retained; ++q) {
                double dot = 0.0;
                for (std::size_t j = 0; j < 10; ++j)
                    dot += model.components.at(r, j) * model.components.at(q, j);
                CHECK(testutil::approx_eq(dot, r == q ? 1.0 : 0.0, 1e-8));
            }

        // variances non-increasing
        for (std::size_t j = 1; j < model.explained.size(); ++j)
            CHECK(model.explained[j] <= model.explained[j - 1] + 1e-12);

        // project + reconstruct
        for (std::size_t i = 0; i < X.rows; ++i) {
            std::vector<double> x(X.row(i), X.row(i) + X.cols);
            auto z = model.project(x);
            for (std::size_t j = 0; j < X.cols; ++j) {
                double rec = model.mean[j];
                for (std::size_t r = 0; r < model.retained; ++r)
                    rec += z[r] * model.components.at(r, j);
                CHECK(testutil::approx_eq(rec, x[j], 1e-8));
            }
        }

#ifdef DTWTC_HAVE_EIGEN
        // independent eigen-decomposition oracle for the explained variances
        Eigen::MatrixXd M(50, 10);
        for (std::size_t i = 0; i < 50; ++i)
            for (std::size_t j = 0; j < 10; ++j) M(static_cast<int>(i), static_cast<int>(j)) = X.at(i, j);
        Eigen::RowVectorXd mean = M.colwise().mean();
        Eigen::MatrixXd centered = M.rowwise() - mean;
        Eigen::MatrixXd cov = centered.transpose() * centered / (50.0 - 1.0);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
        std::vector<double> want(solver.eigenvalues().data(),
                                 solver.eigenvalues().data() + 10);
        std::sort(want.begin(), want.end(), std::greater<>());
        for (std::size_t j = 0; j < 10; ++j)
            CHECK(testutil::approx_eq(model.explained[j], want[j], 1e-9));
#endif
    }

    SUBCASE("errors") {
        Matrix X(1, 3);
        CHECK_THROWS_AS(fit_pca(X, 0.95), DomainError);
        Matrix Y(5, 3);
        CHECK_THROWS_AS(fit_pca(Y, 0.0), DomainError);
        CHECK_THROWS_AS(fit_pca(Y, 1.5), DomainError);
    }
}

TEST_CASE("fit_svm") {
    SUBCASE("separable two-class toy reaches training accuracy 1") {
        Matrix X(8, 2);
        std::vector<int> labels;
        for (int i = 0; i < 8; ++i) {
            double sign = i < 4 ? 1.0 : -1.0;
            X.at(static_cast<std::size_t>(i), 0) = sign * 5.0 + 0.1 * i;
            X.at(static_cast<std::size_t>(i), 1) = sign * 5.0 - 0.1 * i;
            labels.push_back(i < 4 ? 1 : 0);
        }
        auto model = fit_svm(X, labels, 1.0, 100, 5);
        for (std::size_t i = 0; i < 8; ++i) {
            std::vector<double> x(X.row(i), X.row(i) + 2);
            CHECK(model.predict(x) == labels[i]);
        }
        CHECK(model.objective >= 0.0);

        // duplicating samples leaves the separable decision intact
        Matrix X2(16, 2);
        std::vector<int> labels2;
        for (std::size_t i = 0; i < 16; ++i) {
            X2.at(i, 0) = X.at(i % 8, 0);
            X2.at(i, 1) = X.at(i % 8, 1);
            labels2.push_back(labels[i % 8]);
        }
        auto doubled = fit_svm(X2, labels2, 1.0, 100, 5);
        for (std::size_t i = 0; i < 8; ++i) {
            std::vector<double> x(X.row(i), X.row(i) + 2);
            CHECK(doubled.predict(x) == labels[i]);
        }
    }

    SUBCASE("same seed trains to identical predictions on a probe grid") {
        Rng rng(54);
        Matrix X(30, 3);
        std::vector<int> labels;
        for (std::size_t i = 0; i < 30; ++i) {
            int cls = static_cast<int>(i % 3);
            for (std::size_t j = 0; j < 3; ++j)
                X.at(i, j) = (j == static_cast<std::size_t>(cls) ? 3.0 : 0.0) +
                             rng.uniform_real();
            labels.push_back(cls);
        }
        auto m1 = fit_svm(X, labels, 1.0, 40, 77);
        auto m2 = fit_svm(X, labels, 1.0, 40, 77);
        for (double a = -1.0; a <= 4.0; a += 0.5)
            for (double b = -1.0; b <= 4.0; b += 0.5) {
                std::vector<double> probe{a, b, 1.0};
                CHECK(m1.predict(probe) == m2.predict(probe));
            }
        CHECK(m1.weights.v == m2.weights.v);
    }

    SUBCASE("well-separated Gaussian blobs classify held-out points") {
        Rng rng(55);
        const double sep = 10.0;
        auto blob = [&](int cls, std::size_t count, Matrix& X, std::vector<int>& labels,
                        std::size_t row0) {
            double cx = cls == 0 ? 0.0 : (cls == 1 ? sep : 0.0);
            double cy = cls == 2 ? sep : 0.0;
            for (std::size_t i = 0; i < count; ++i) {
                X.at(row0 + i, 0) = cx + rng.gaussian(0.0, 1.0);
                X.at(row0 + i, 1) = cy + rng.gaussian(0.0, 1.0);
                labels[row0 + i] = cls;
            }
        };
        Matrix train(90, 2), test(45, 2);
        std::vector<int> train_labels(90), test_labels(45);
        for (int cls = 0; cls < 3; ++cls) {
            blob(cls, 30, train, train_labels, static_cast<std::size_t>(cls) * 30);
            blob(cls, 15, test, test_labels, static_cast<std::size_t>(cls) * 15);
        }
        auto model = fit_svm(train, train_labels, 1.0, 60, 9);

        // nearest-centroid oracle
        double cents[3][2] = {};
        int counts[3] = {};
        for (std::size_t i = 0; i < 90; ++i) {
            cents[train_labels[i]][0] += train.at(i, 0);
            cents[train_labels[i]][1] += train.at(i, 1);
            ++counts[train_labels[i]];
        }
        for (int c = 0; c < 3; ++c) {
            cents[c][0] /= counts[c];
            cents[c][1] /= counts[c];
        }

        std::size_t hits = 0, agree = 0;
        for (std::size_t i = 0; i < 45; ++i) {
            std::vector<double> x{test.at(i, 0), test.at(i, 1)};
            int got = model.predict(x);
            if (got == test_labels[i]) ++hits;
            int near = 0;
            double best = std::numeric_limits<double>::infinity();
            for (int c = 0; c < 3; ++c) {
                double dx = x[0] - cents[c][0], dy = x[1] - cents[c][1];
                double d = dx * dx + dy * dy;
                if (d < best) { best = d; near = c; }
            }
            if (got == near) ++agree;
        }
        CHECK(static_cast<double>(hits) / 45.0 >= 0.95);
        CHECK(static_cast<double>(agree) / 45.0 >= 0.95);
    }

    SUBCASE("errors") {
        Matrix X(4, 2);
        std::vector<int> one_class{1, 1, 1, 1};
        CHECK_THROWS_AS(fit_svm(X, one_class, 1.0, 10, 0), DomainError);
        std::vector<int> two{0, 1};
        Matrix Y(2, 2);
        CHECK_THROWS_AS(fit_svm(Y, two, -1.0, 10, 0), DomainError);
        CHECK_THROWS_AS(fit_svm(Y, two, 1.0, 0, 0), DomainError);
    }
}

TEST_CASE("confusion matrix and merged-static accuracy") {
    std::vector<int> classes{0, 1, 2, 3, 4, 5};
    Rng rng(56);
    std::vector<int> actual, predicted;
    for (int i = 0; i < 200; ++i) {
        actual.push_back(static_cast<int>(rng.uniform_index(6)));
        predicted.push_back(static_cast<int>(rng.uniform_index(6)));
    }
    auto cm = make_confusion(classes, actual, predicted);

    SUBCASE("trace/total equals the direct accuracy, exactly") {
        std::size_t hits = 0;
        for (std::size_t i = 0; i < actual.size(); ++i)
            if (actual[i] == predicted[i]) ++hits;
        CHECK(cm.accuracy() == static_cast<double>(hits) / 200.0);
        CHECK(cm.total() == 200);
        CHECK(cm.classes.size() == 6);
    }

    SUBCASE("merging static activities never lowers accuracy") {
        auto merged = merged_static_accuracy(classes, actual, predicted);
        REQUIRE(merged.has_value());
        CHECK(*merged >= cm.accuracy());
    }

    SUBCASE("non-UCI label sets do not get a merged accuracy") {
        CHECK(!merged_static_accuracy({0, 1, 2}, {0, 1}, {0, 1}).has_value());
    }

    SUBCASE("unknown labels are rejected") {
        CHECK_THROWS_AS(make_confusion({0, 1}, {0, 7}, {0, 1}), DomainError);
    }
}

TEST_CASE("train_pipeline and predict") {
    Rng rng(57);
    Dataset train = toy_dataset(rng, 10);
    Dataset test = toy_dataset(rng, 4);
    PipelineConfig config = toy_config();

    SUBCASE("pipeline completes with at least one template per activity") {
        auto model = train_pipeline(train, config);
        CHECK(model.templates.size() >= 2);
        CHECK(model.pca.retained >= 1);
        CHECK(model.svm.classes == std::vector<int>{0, 1});

        auto result = predict(model, test);
        CHECK(result.predicted.size() == test.size());
        CHECK(result.confusion.total() == static_cast<std::int64_t>(test.size()));
        CHECK(result.accuracy == result.confusion.accuracy());
        CHECK(!result.merged_static_accuracy.has_value()); // not a UCI label set
        CHECK(result.accuracy >= 0.75); // easily separable frequencies
    }

    SUBCASE("cut = 1 gives one template per activity") {
        PipelineConfig c = config;
        c.cut = 1.0;
        auto model = train_pipeline(train, c);
        CHECK(model.templates.size() == 2);
    }

    SUBCASE("empty test set is rejected") {
        auto model = train_pipeline(train, config);
        Dataset empty;
        CHECK_THROWS_AS(predict(model, empty), DomainError);
    }

    SUBCASE("single-activity training is rejected") {
        Dataset bad;
        for (int i = 0; i < 4; ++i)
            bad.add({testutil::random_series(rng, 16, 1), 0, std::nullopt});
        CHECK_THROWS_AS(train_pipeline(bad, config), DomainError);
    }
}

TEST_CASE("model bundle persistence") {
    Rng rng(58);
    Dataset train = toy_dataset(rng, 8);
    Dataset test = toy_dataset(rng, 3);
    PipelineConfig config = toy_config();
    config.method = AveragingMethod::dba;

    testutil::TempDir tmp("model_bundle");
    auto model = train_pipeline(train, config);
    save_model(tmp.path / "m", model);

    SUBCASE("round-trip preserves predictions") {
        auto loaded = load_model(tmp.path / "m");
        CHECK(loaded.templates.size() == model.templates.size());
        CHECK(loaded.pca.retained == model.pca.retained);
        CHECK(loaded.svm.classes == model.svm.classes);
        CHECK(loaded.config.cut == model.config.cut);
        CHECK(loaded.config.seed == model.config.seed);

        auto a = predict(model, test);
        auto b = predict(loaded, test);
        CHECK(a.predicted == b.predicted);
        CHECK(a.accuracy == b.accuracy);
    }

    SUBCASE("retraining with the same config is byte-identical") {
        auto model2 = train_pipeline(train, config);
        save_model(tmp.path / "m2", model2);
        for (const char* f : {"templates.txt", "pca.txt", "svm.txt", "config.txt"})
            CHECK(slurp(tmp.path / "m" / f) == slurp(tmp.path / "m2" / f));
    }

    SUBCASE("prediction report writes both full and filtered metrics") {
        auto loaded = load_model(tmp.path / "m");
        loaded.config.flat_quantile = 0.2;
        auto report = predict_report(loaded, test);
        REQUIRE(report.filter.has_value());

        std::ostringstream out;
        write_prediction_report(out, report, loaded, test);
        std::string text = out.str();
        CHECK(text.find("# dtwtc predict v1") == 0);
        CHECK(text.find("accuracy full = ") != std::string::npos);
        CHECK(text.find("flat-filter quantile = ") != std::string::npos);
        CHECK(text.find("confusion full") != std::string::npos);
    }
}
