// dtwtc command-line front end: cluster / train / predict / synth / bench.
//
// Exit codes: 0 success, 1 data or format error, 2 usage error.

#include "dtwtc/classify.hpp"
#include "dtwtc/clustering.hpp"
#include "dtwtc/dataset_io.hpp"
#include "dtwtc/error.hpp"
#include "dtwtc/synth.hpp"
#include "dtwtc/templates.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <thread>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using namespace dtwtc;

struct DataArgs {
    std::vector<std::string> signals;
    std::string labels;
};

// key = value config file; flags override it, it overrides defaults.
// Unknown keys are ignored so an artifact's config echo can be replayed.
void add_config_option(CLI::App* cmd) {
    static std::string sink;
    cmd->add_option("--config", sink, "Read options from a key=value file");
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

// Expands `--config FILE` into explicit option tokens for the selected
// subcommand. Entries for options already present on the command line are
// dropped, so explicit flags win; entries that match no option are ignored.
std::vector<std::string> expand_config(const CLI::App& app, int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);

    const CLI::App* sub = nullptr;
    std::string config_file;
    std::set<std::string> given;
    for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string& tok = args[i];
        if (!tok.empty() && tok[0] != '-' && sub == nullptr) {
            sub = app.get_subcommand_no_throw(tok);
            continue;
        }
        if (tok.rfind("--", 0) == 0) {
            auto eq = tok.find('=');
            std::string name = tok.substr(2, eq == std::string::npos ? eq : eq - 2);
            given.insert(name);
            if (name == "config") {
                if (eq != std::string::npos)
                    config_file = tok.substr(eq + 1);
                else if (i + 1 < args.size())
                    config_file = args[i + 1];
            }
        }
    }
    if (config_file.empty() || sub == nullptr) return args;

    std::ifstream in(config_file);
    if (!in) throw dtwtc::FormatError("cannot open config file: " + config_file);
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty() || given.contains(key)) continue;
        if (sub->get_option_no_throw("--" + key) == nullptr) continue;
        args.push_back("--" + key + (value.empty() ? "" : "=" + value));
    }
    return args;
}

void add_data_options(CLI::App* cmd, DataArgs& args, const std::string& prefix = "") {
    cmd->add_option("--" + prefix + "signals", args.signals,
                    "Signal files, one per channel (comma separated)")
        ->required()
        ->delimiter(',');
    cmd->add_option("--" + prefix + "labels", args.labels, "Label file (one integer per row)")
        ->required();
}

Dataset load_data(const DataArgs& args) {
    std::vector<fs::path> paths(args.signals.begin(), args.signals.end());
    return load_uci_layout(paths, args.labels);
}

// Applies the flat-curve filter when quantile > 0 and logs what it removed.
Dataset load_filtered(const DataArgs& args, double quantile, const char* what) {
    Dataset data = load_data(args);
    std::cerr << "loaded " << what << ": " << data.size() << " samples, m=" << data.length()
              << ", p=" << data.dim() << "\n";
    if (quantile <= 0.0) return data;
    auto [kept, report] = remove_flat_curves(data, quantile);
    std::cerr << "flat filter (quantile " << quantile << ") removed " << report.removed.size()
              << " of " << data.size() << " " << what << " samples\n";
    return kept;
}

unsigned resolve_threads(unsigned threads) {
    if (threads != 0) return threads;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

void write_config_header(std::ostream& out, const std::string& kind,
                         const std::vector<std::pair<std::string, std::string>>& echo) {
    out << "# dtwtc " << kind << " v1\n";
    for (const auto& [k, v] : echo) out << "# config: " << k << " = " << v << '\n';
}

// input paths are part of the effective config; output destinations are not,
// so identical runs stay byte-identical wherever they land
std::vector<std::pair<std::string, std::string>> path_echo(const DataArgs& data,
                                                           const std::string& prefix = "") {
    std::string joined;
    for (std::size_t i = 0; i < data.signals.size(); ++i) {
        if (i) joined += ',';
        joined += data.signals[i];
    }
    return {{prefix + "signals", joined}, {prefix + "labels", data.labels}};
}

std::vector<std::string> config_header_lines(
    const std::string& kind, const std::vector<std::pair<std::string, std::string>>& echo) {
    std::vector<std::string> lines;
    lines.push_back("dtwtc " + kind + " v1");
    for (const auto& [k, v] : echo) lines.push_back("config: " + k + " = " + v);
    return lines;
}

// Two-column (index, value) file per dimension, for external plotting.
void dump_series(const fs::path& dir, const std::string& stem, const TimeSeries& series) {
    fs::create_directories(dir);
    for (std::size_t d = 0; d < series.dim(); ++d) {
        std::ofstream out(dir / (stem + "_dim" + std::to_string(d) + ".txt"));
        for (std::size_t t = 0; t < series.length(); ++t)
            out << t << ' ' << format_g17(series(t, d)) << '\n';
    }
}

struct PipelineArgs {
    std::string distance = "dtwsubseq";
    std::string method = "dpa";
    double cut = 0.25;
    int bw = 8;
    int dw = 0; // no default: the displacement window is data-dependent
    double pca_variance = 0.95;
    double svm_c = 1.0;
    int epochs = 100;
    int dba_max_iters = 10;
    double dba_tol = 1e-6;
    double flat_quantile = 0.05;
    bool no_flat_filter = false;
    bool no_merged_static = false;
    std::uint64_t seed = 0;
    unsigned threads = 0;

    PipelineConfig to_config() const {
        PipelineConfig c;
        c.distance = distance_kind_from_string(distance);
        c.method = averaging_method_from_string(method);
        c.cut = cut;
        c.bandwidth = bw;
        c.displacement_window = dw;
        c.pca_variance = pca_variance;
        c.svm_c = svm_c;
        c.svm_epochs = epochs;
        c.dba_max_iters = dba_max_iters;
        c.dba_tol = dba_tol;
        c.flat_quantile = no_flat_filter ? 0.0 : flat_quantile;
        c.merged_static = !no_merged_static;
        c.seed = seed;
        c.threads = resolve_threads(threads);
        return c;
    }
};

void add_distance_options(CLI::App* cmd, PipelineArgs& a, bool need_dw) {
    cmd->add_option("--distance", a.distance, "Distance kind: dtw | dtwsubseq")
        ->check(CLI::IsMember({"dtw", "dtwsubseq"}))
        ->envname("DTWTC_DISTANCE");
    cmd->add_option("--bw", a.bw, "DTW bandwidth (band radius)")
        ->check(CLI::NonNegativeNumber)
        ->envname("DTWTC_BW");
    auto* dw = cmd->add_option("--dw", a.dw, "Displacement window for dtwsubseq")
                   ->check(CLI::PositiveNumber)
                   ->envname("DTWTC_DW");
    if (need_dw) dw->required();
    cmd->add_option("--threads", a.threads, "Worker threads (0 = hardware)")
        ->envname("DTWTC_THREADS");
    cmd->add_option("--flat-quantile", a.flat_quantile,
                    "Flat-curve range quantile applied per set")
        ->envname("DTWTC_FLAT_QUANTILE");
    cmd->add_flag("--no-flat-filter", a.no_flat_filter, "Disable the flat-curve filter");
}

void add_train_options(CLI::App* cmd, PipelineArgs& a) {
    cmd->add_option("--method", a.method, "Averaging method: dpa | dba")
        ->check(CLI::IsMember({"dpa", "dba"}))
        ->envname("DTWTC_METHOD");
    cmd->add_option("--cut", a.cut, "Flat-cluster diameter fraction in (0,1]")
        ->envname("DTWTC_CUT");
    cmd->add_option("--pca-variance", a.pca_variance, "PCA retained variance fraction")
        ->envname("DTWTC_PCA_VARIANCE");
    cmd->add_option("--svm-c", a.svm_c, "SVM regularization C")->envname("DTWTC_SVM_C");
    cmd->add_option("--epochs", a.epochs, "SVM training epochs")->envname("DTWTC_EPOCHS");
    cmd->add_option("--dba-max-iters", a.dba_max_iters, "DBA iteration limit");
    cmd->add_option("--dba-tol", a.dba_tol, "DBA relative objective tolerance");
    cmd->add_option("--seed", a.seed, "RNG seed")->envname("DTWTC_SEED");
    cmd->add_flag("--no-merged-static", a.no_merged_static,
                  "Do not report merged-static accuracy");
}

// ---- subcommands ----

int run_cluster(const DataArgs& data_args, const PipelineArgs& args, const std::string& out_dir) {
    PipelineConfig config = args.to_config();
    Dataset data = load_filtered(data_args, config.flat_quantile, "input");
    fs::create_directories(out_dir);

    auto activities = cluster_activities(data, config);
    auto echo = config.echo();
    for (const auto& [k, v] : path_echo(data_args)) echo.emplace_back(k, v);
    for (const auto& [clusters, dists] : activities) {
        const std::string label = std::to_string(clusters.label);
        {
            std::ofstream out(fs::path(out_dir) / ("distances_" + label + ".txt"));
            write_config_header(out, "distances", echo);
            out << "# label = " << label << " n = " << dists.n << '\n';
            write_distance_matrix(out, dists);
        }
        {
            std::ofstream out(fs::path(out_dir) / ("clusters_" + label + ".txt"));
            write_config_header(out, "clusters", echo);
            out << "# label = " << label << " clusters = " << clusters.clusters.size()
                << " cut-height = " << format_g17(clusters.cut_height) << '\n';
            for (std::size_t c = 0; c < clusters.clusters.size(); ++c)
                for (int idx : clusters.clusters[c]) out << idx << ' ' << c << '\n';
        }
        std::cerr << "activity " << label << ": " << dists.n << " samples -> "
                  << clusters.clusters.size() << " clusters\n";
    }
    return 0;
}

int run_train(const DataArgs& data_args, const PipelineArgs& args, const std::string& out_dir,
              const std::string& dump_dir) {
    PipelineConfig config = args.to_config();
    Dataset train = load_filtered(data_args, config.flat_quantile, "train");

    auto model = train_pipeline(train, config);
    std::cerr << "templates: " << model.templates.size()
              << ", pca retained: " << model.pca.retained
              << ", svm objective: " << model.svm.objective << "\n";
    save_model(out_dir, model, path_echo(data_args));
    std::cerr << "model bundle written to " << out_dir << "\n";

    if (!dump_dir.empty()) {
        for (std::size_t i = 0; i < model.templates.size(); ++i) {
            const auto& t = model.templates[i];
            dump_series(dump_dir,
                        "template_" + std::to_string(i) + "_label" + std::to_string(t.label),
                        t.series);
        }
        std::cerr << "template plots dumped to " << dump_dir << "\n";
    }
    return 0;
}

int run_predict(const std::string& model_dir, const DataArgs& data_args,
                const PipelineArgs& args, const std::string& out_file, bool have_quantile,
                bool have_threads, bool have_merged) {
    auto model = load_model(model_dir);
    // flags override the model's recorded config
    if (have_quantile) model.config.flat_quantile = args.no_flat_filter ? 0.0 : args.flat_quantile;
    if (args.no_flat_filter) model.config.flat_quantile = 0.0;
    if (have_threads) model.config.threads = resolve_threads(args.threads);
    if (have_merged) model.config.merged_static = !args.no_merged_static;

    Dataset test = load_data(data_args);
    std::cerr << "loaded test: " << test.size() << " samples\n";
    auto report = predict_report(model, test);

    std::ofstream out(out_file);
    if (!out) throw dtwtc::FormatError("cannot write " + out_file);
    auto extras = path_echo(data_args);
    extras.emplace_back("model", model_dir);
    write_prediction_report(out, report, model, test, extras);

    std::cerr << "accuracy (full test set): " << report.full.accuracy << "\n";
    if (report.filtered)
        std::cerr << "accuracy (flat-filtered): " << report.filtered->accuracy << "\n";
    return 0;
}

struct SynthArgs {
    std::string out_dir;
    std::string sources_file;
    int activities = 4;
    int train_per = 200;
    int test_per = 50;
    int fft_length = 256;
    int noise_length = 10;
    double noise_stddev = 2.23606797749978969;
    bool noise_complex = false;
    int length = 128;
    std::uint64_t seed = 0;
    std::string plot_dir;
};

int run_synth(const SynthArgs& args) {
    dtwtc::SynthConfig config;
    config.train_per_activity = args.train_per;
    config.test_per_activity = args.test_per;
    config.fft_length = args.fft_length;
    config.noise_length = args.noise_length;
    config.noise_stddev = args.noise_stddev;
    config.noise_complex = args.noise_complex;
    config.output_length = args.length;
    config.seed = args.seed;

    if (args.sources_file.empty()) {
        config.sources = dtwtc::bundled_pseudo_activities(args.activities, args.length);
        config.activity_names = dtwtc::bundled_activity_names(args.activities);
        std::cerr << "using bundled pseudo-activity sources (" << args.activities
                  << " activities)\n";
    } else {
        std::ifstream in(args.sources_file);
        if (!in) throw dtwtc::FormatError("cannot open " + args.sources_file);
        auto templates = dtwtc::read_template_set(in);
        std::map<int, std::vector<TimeSeries>> by_label;
        for (auto& t : templates) by_label[t.label].push_back(std::move(t.series));
        for (auto& [label, series] : by_label) config.sources.push_back(std::move(series));
        std::cerr << "loaded " << config.sources.size() << " activities from "
                  << args.sources_file << "\n";
    }

    auto result = dtwtc::generate_dataset(config);

    std::vector<std::pair<std::string, std::string>> echo = {
        {"seed", std::to_string(args.seed)},
        {"activities", std::to_string(config.sources.size())},
        {"train-per", std::to_string(args.train_per)},
        {"test-per", std::to_string(args.test_per)},
        {"fft-length", std::to_string(args.fft_length)},
        {"noise-length", std::to_string(args.noise_length)},
        {"noise-stddev", format_g17(args.noise_stddev)},
        {"noise-complex", args.noise_complex ? "true" : "false"},
        {"length", std::to_string(args.length)},
        {"sources", args.sources_file.empty() ? "bundled" : args.sources_file},
    };
    auto headers = config_header_lines("synth", echo);

    fs::path out(args.out_dir);
    fs::create_directories(out / "train");
    save_uci_layout(result.train, {out / "train" / "signal_0.txt"},
                    out / "train" / "labels.txt", headers);
    if (!result.test.empty()) {
        fs::create_directories(out / "test");
        save_uci_layout(result.test, {out / "test" / "signal_0.txt"},
                        out / "test" / "labels.txt", headers);
    }

    json manifest;
    manifest["format"] = "dtwtc synth manifest v1";
    for (const auto& [k, v] : echo) manifest["config"][k] = v;
    manifest["label_names"] = json::object();
    for (const auto& [label, name] : result.train.label_names())
        manifest["label_names"][std::to_string(label)] = name;
    manifest["samples"] = json::array();
    for (const auto& e : result.manifest) {
        manifest["samples"].push_back({{"split", e.split},
                                       {"activity", e.activity},
                                       {"index", e.index},
                                       {"window_offset", e.window_offset},
                                       {"noise_offset", e.noise_offset}});
    }
    std::ofstream mf(out / "manifest.json");
    mf << manifest.dump(2) << '\n';

    if (!args.plot_dir.empty()) {
        for (std::size_t a = 0; a < config.sources.size(); ++a)
            for (std::size_t v = 0; v < config.sources[a].size(); ++v)
                dump_series(args.plot_dir,
                            "source_act" + std::to_string(a) + "_var" + std::to_string(v),
                            config.sources[a][v]);
        for (int a = 0; a < static_cast<int>(config.sources.size()); ++a) {
            for (std::size_t i = 0; i < result.train.size(); ++i) {
                if (result.train[i].label == a) {
                    dump_series(args.plot_dir, "sample_act" + std::to_string(a),
                                result.train[i].series);
                    break;
                }
            }
        }
    }

    std::cerr << "synth: wrote " << result.train.size() << " train / " << result.test.size()
              << " test samples to " << args.out_dir << "\n";
    return 0;
}

int run_bench(const DataArgs& train_args, const DataArgs& test_args, const PipelineArgs& args,
              const std::string& out_file) {
    PipelineConfig base = args.to_config();
    Dataset train = load_filtered(train_args, base.flat_quantile, "train");
    Dataset test = load_data(test_args);
    std::cerr << "loaded test: " << test.size() << " samples\n";

    std::ofstream out(out_file);
    if (!out) throw dtwtc::FormatError("cannot write " + out_file);
    auto echo = base.echo();
    for (const auto& [k, v] : path_echo(train_args, "train-")) echo.emplace_back(k, v);
    for (const auto& [k, v] : path_echo(test_args, "test-")) echo.emplace_back(k, v);
    write_config_header(out, "bench", echo);
    out << "cut distance averaging accuracy accuracy_merged_static accuracy_flat_filtered\n";

    for (double cut : {0.25, 0.5}) {
        for (auto kind : {dtwtc::DistanceKind::dtw, dtwtc::DistanceKind::dtwsubseq}) {
            for (auto method : {dtwtc::AveragingMethod::dpa, dtwtc::AveragingMethod::dba}) {
                PipelineConfig config = base;
                config.cut = cut;
                config.distance = kind;
                config.method = method;
                auto model = train_pipeline(train, config);
                auto report = predict_report(model, test);

                out << format_g17(cut) << ' ' << to_string(kind) << ' ' << to_string(method)
                    << ' ' << format_g17(report.full.accuracy) << ' '
                    << (report.full.merged_static_accuracy && config.merged_static
                            ? format_g17(*report.full.merged_static_accuracy)
                            : "-")
                    << ' '
                    << (report.filtered ? format_g17(report.filtered->accuracy) : "-") << '\n';
                out.flush();
                std::cerr << "bench: cut=" << cut << " " << to_string(kind) << " "
                          << to_string(method) << " -> " << report.full.accuracy << " ("
                          << model.templates.size() << " templates)\n";
            }
        }
    }
    std::cerr << "results written to " << out_file << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"DTW template-selection classifier for multivariate time series"};
    app.require_subcommand(1);

    // cluster
    auto* cluster_cmd = app.add_subcommand("cluster", "Per-activity distance matrices and clusters");
    add_config_option(cluster_cmd);
    DataArgs cluster_data;
    PipelineArgs cluster_args;
    std::string cluster_out = "clusters";
    add_data_options(cluster_cmd, cluster_data);
    add_distance_options(cluster_cmd, cluster_args, true);
    cluster_cmd->add_option("--cut", cluster_args.cut, "Flat-cluster diameter fraction");
    cluster_cmd->add_option("--out", cluster_out, "Output directory");

    // train
    auto* train_cmd = app.add_subcommand("train", "Train a template classification model");
    add_config_option(train_cmd);
    DataArgs train_data;
    PipelineArgs train_args;
    std::string train_out = "model";
    std::string dump_dir;
    add_data_options(train_cmd, train_data);
    add_distance_options(train_cmd, train_args, true);
    add_train_options(train_cmd, train_args);
    train_cmd->add_option("--out", train_out, "Model bundle directory");
    train_cmd->add_option("--dump-templates", dump_dir,
                          "Also dump templates as two-column plot files");

    // predict
    auto* predict_cmd = app.add_subcommand("predict", "Classify a test set with a trained model");
    add_config_option(predict_cmd);
    DataArgs predict_data;
    PipelineArgs predict_args;
    std::string model_dir;
    std::string predict_out = "predictions.txt";
    predict_cmd->add_option("--model", model_dir, "Model bundle directory")->required();
    add_data_options(predict_cmd, predict_data);
    auto* pq = predict_cmd->add_option("--flat-quantile", predict_args.flat_quantile,
                                       "Override the model's flat-filter quantile");
    predict_cmd->add_flag("--no-flat-filter", predict_args.no_flat_filter,
                          "Disable the flat-curve filter");
    auto* pt = predict_cmd->add_option("--threads", predict_args.threads,
                                       "Worker threads (0 = hardware)")
                   ->envname("DTWTC_THREADS");
    auto* pm = predict_cmd->add_flag("--no-merged-static", predict_args.no_merged_static,
                                     "Do not report merged-static accuracy");
    predict_cmd->add_option("--out", predict_out, "Predictions file");

    // synth
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic dataset");
    add_config_option(synth_cmd);
    SynthArgs synth_args;
    synth_cmd->add_option("--out", synth_args.out_dir, "Output directory")->required();
    synth_cmd->add_option("--sources", synth_args.sources_file,
                          "Template-set file with source templates (default: bundled)");
    synth_cmd->add_option("--activities", synth_args.activities,
                          "Activity count for bundled sources");
    synth_cmd->add_option("--train-per", synth_args.train_per, "Training samples per activity");
    synth_cmd->add_option("--test-per", synth_args.test_per, "Test samples per activity");
    synth_cmd->add_option("--fft-length", synth_args.fft_length, "Transform length");
    synth_cmd->add_option("--noise-length", synth_args.noise_length, "Perturbed bin count");
    synth_cmd->add_option("--noise-stddev", synth_args.noise_stddev,
                          "Noise standard deviation (default sqrt(5))");
    synth_cmd->add_flag("--noise-complex", synth_args.noise_complex,
                        "Draw independent real and imaginary noise");
    synth_cmd->add_option("--length", synth_args.length, "Output series length");
    synth_cmd->add_option("--seed", synth_args.seed, "RNG seed")->envname("DTWTC_SEED");
    synth_cmd->add_option("--plot-dir", synth_args.plot_dir,
                          "Dump source templates and example samples as plot files");

    // bench
    auto* bench_cmd = app.add_subcommand(
        "bench", "Run the {cut 0.25,0.5} x {dtw,dtwsubseq} x {dpa,dba} grid");
    add_config_option(bench_cmd);
    DataArgs bench_train, bench_test;
    PipelineArgs bench_args;
    std::string bench_out = "bench.txt";
    add_data_options(bench_cmd, bench_train, "train-");
    add_data_options(bench_cmd, bench_test, "test-");
    add_distance_options(bench_cmd, bench_args, true);
    add_train_options(bench_cmd, bench_args);
    bench_cmd->add_option("--out", bench_out, "Results table file");

    try {
        auto args = expand_config(app, argc, argv);
        std::reverse(args.begin(), args.end()); // CLI11 consumes from the back
        app.parse(std::move(args));

        if (app.got_subcommand(cluster_cmd))
            return run_cluster(cluster_data, cluster_args, cluster_out);
        if (app.got_subcommand(train_cmd))
            return run_train(train_data, train_args, train_out, dump_dir);
        if (app.got_subcommand(predict_cmd))
            return run_predict(model_dir, predict_data, predict_args, predict_out,
                               pq->count() > 0, pt->count() > 0, pm->count() > 0);
        if (app.got_subcommand(synth_cmd)) return run_synth(synth_args);
        if (app.got_subcommand(bench_cmd))
            return run_bench(bench_train, bench_test, bench_args, bench_out);
        return 2;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const dtwtc::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
