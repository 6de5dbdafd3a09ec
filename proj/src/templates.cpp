#include "dtwtc/templates.hpp"

#include "dtwtc/dataset_io.hpp"
#include "dtwtc/error.hpp"
#include "dtwtc/rand.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace dtwtc {

std::string to_string(AveragingMethod m) {
    return m == AveragingMethod::dpa ? "dpa" : "dba";
}

std::string to_string(DistanceKind k) {
    return k == DistanceKind::dtw ? "dtw" : "dtwsubseq";
}

AveragingMethod averaging_method_from_string(const std::string& s) {
    if (s == "dpa") return AveragingMethod::dpa;
    if (s == "dba") return AveragingMethod::dba;
    throw DomainError("unknown averaging method: " + s);
}

DistanceKind distance_kind_from_string(const std::string& s) {
    if (s == "dtw") return DistanceKind::dtw;
    if (s == "dtwsubseq") return DistanceKind::dtwsubseq;
    throw DomainError("unknown distance kind: " + s);
}

Template dpa_template(const std::vector<TimeSeries>& cluster, const DtwParams& params) {
    if (cluster.empty()) throw DomainError("dpa_template: empty cluster");
    const std::size_t k = cluster.size();

    std::size_t medoid = 0;
    double best_sum = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < k; ++t) {
        double sum = 0.0;
        for (std::size_t x = 0; x < k; ++x) {
            if (x == t) continue;
            sum += dtwsubseq_distance(cluster[x], cluster[t],
                                      params.displacement_window, params.bandwidth);
        }
        if (sum < best_sum) { best_sum = sum; medoid = t; } // ties keep the lowest index
    }

    const std::size_t m = cluster.front().length();
    const std::size_t p = cluster.front().dim();
    std::vector<double> acc(m * p, 0.0);
    for (const auto& member : cluster) {
        TimeSeries aligned = align_to(cluster[medoid], member, params.bandwidth);
        const auto& v = aligned.values();
        for (std::size_t i = 0; i < v.size(); ++i) acc[i] += v[i];
    }
    for (double& v : acc) v /= static_cast<double>(k);

    Template out{TimeSeries(std::move(acc), p), -1, AveragingMethod::dpa, {}};
    out.provenance.cluster_size = static_cast<int>(k);
    out.provenance.medoid_index = static_cast<int>(medoid);
    return out;
}

namespace {

double dba_objective(const TimeSeries& average, const std::vector<TimeSeries>& cluster,
                     int bandwidth) {
    double total = 0.0;
    for (const auto& member : cluster) total += dtw_sq_distance(average, member, bandwidth);
    return total;
}

} // namespace

Template dba_template(const std::vector<TimeSeries>& cluster, const DtwParams& params,
                      const DbaOptions& options) {
    if (cluster.empty()) throw DomainError("dba_template: empty cluster");
    if (options.max_iters < 1) throw DomainError("dba_template: max_iters must be >= 1");
    if (options.tol < 0.0) throw DomainError("dba_template: tol must be >= 0");

    Rng rng(options.seed);
    const std::size_t init = rng.uniform_index(cluster.size());
    TimeSeries average = cluster[init];
    const std::size_t m = average.length();
    const std::size_t p = average.dim();

    TemplateProvenance prov;
    prov.cluster_size = static_cast<int>(cluster.size());
    prov.init_index = static_cast<int>(init);

    double prev = dba_objective(average, cluster, params.bandwidth);
    prov.objective_history.push_back(prev);

    for (int iter = 0; iter < options.max_iters; ++iter) {
        std::vector<double> acc(m * p, 0.0);
        std::vector<std::size_t> count(m, 0);
        for (const auto& member : cluster) {
            WarpingPath path = dtw_sq_path(average, member, params.bandwidth);
            for (const auto& [s, t] : path.pairs) {
                auto row = member.row(static_cast<std::size_t>(t));
                for (std::size_t d = 0; d < p; ++d)
                    acc[static_cast<std::size_t>(s) * p + d] += row[d];
                ++count[static_cast<std::size_t>(s)];
            }
        }
        for (std::size_t s = 0; s < m; ++s)
            for (std::size_t d = 0; d < p; ++d) acc[s * p + d] /= static_cast<double>(count[s]);
        average = TimeSeries(std::move(acc), p);

        double cur = dba_objective(average, cluster, params.bandwidth);
        prov.objective_history.push_back(cur);
        prov.iterations = iter + 1;
        if (prev <= 0.0 || prev - cur < options.tol * prev) break;
        prev = cur;
    }

    return Template{std::move(average), -1, AveragingMethod::dba, std::move(prov)};
}

std::vector<Template> build_templates(const std::vector<ActivityClusters>& activities,
                                      AveragingMethod method, const DtwParams& params,
                                      std::uint64_t seed, int dba_max_iters, double dba_tol) {
    std::vector<Template> out;
    std::size_t position = 0;
    for (const auto& activity : activities) {
        for (const auto& cluster : activity.clusters) {
            if (cluster.empty()) throw DomainError("build_templates: empty cluster");
            Template t = method == AveragingMethod::dpa
                             ? dpa_template(cluster, params)
                             : dba_template(cluster, params,
                                            DbaOptions{dba_max_iters, dba_tol,
                                                       mix_seed(seed, 1, position)});
            t.label = activity.label;
            out.push_back(std::move(t));
            ++position;
        }
    }
    return out;
}

void write_template_set(std::ostream& out, const std::vector<Template>& templates) {
    out << "templateset v1 count=" << templates.size() << '\n';
    for (const auto& t : templates) {
        out << "template v1 m=" << t.series.length() << " p=" << t.series.dim()
            << " label=" << t.label << " method=" << to_string(t.method)
            << " cluster_size=" << t.provenance.cluster_size;
        if (t.method == AveragingMethod::dpa)
            out << " medoid=" << t.provenance.medoid_index;
        else
            out << " init=" << t.provenance.init_index
                << " iters=" << t.provenance.iterations;
        out << '\n';
        for (std::size_t s = 0; s < t.series.length(); ++s) {
            for (std::size_t d = 0; d < t.series.dim(); ++d) {
                if (d) out << ' ';
                out << format_g17(t.series(s, d));
            }
            out << '\n';
        }
        out << "%\n";
    }
}

namespace {

std::map<std::string, std::string> parse_kv(std::istringstream& ss) {
    std::map<std::string, std::string> kv;
    std::string tok;
    while (ss >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) throw FormatError("template header: bad token '" + tok + "'");
        kv[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    return kv;
}

} // namespace

std::vector<Template> read_template_set(std::istream& in) {
    std::string line;
    // skip artifact comment header, if any
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] != '#') break;
    }
    std::istringstream head(line);
    std::string tag, version;
    head >> tag >> version;
    if (tag != "templateset" || version != "v1")
        throw FormatError("template set: unrecognized header: " + line);
    auto kv = parse_kv(head);
    const std::size_t count = std::stoul(kv.at("count"));

    std::vector<Template> out;
    for (std::size_t i = 0; i < count; ++i) {
        if (!std::getline(in, line)) throw FormatError("template set: truncated");
        std::istringstream th(line);
        th >> tag >> version;
        if (tag != "template" || version != "v1")
            throw FormatError("template set: bad template header: " + line);
        auto h = parse_kv(th);
        const std::size_t m = std::stoul(h.at("m"));
        const std::size_t p = std::stoul(h.at("p"));

        std::vector<double> flat;
        flat.reserve(m * p);
        for (std::size_t s = 0; s < m; ++s) {
            if (!std::getline(in, line)) throw FormatError("template set: truncated values");
            std::istringstream row(line);
            double v;
            std::size_t got = 0;
            while (row >> v) { flat.push_back(v); ++got; }
            if (got != p) throw FormatError("template set: bad row width");
        }
        if (!std::getline(in, line) || line != "%")
            throw FormatError("template set: missing separator");

        Template t{TimeSeries(std::move(flat), p), std::stoi(h.at("label")),
                   averaging_method_from_string(h.at("method")), {}};
        t.provenance.cluster_size = std::stoi(h.at("cluster_size"));
        if (t.method == AveragingMethod::dpa) {
            t.provenance.medoid_index = std::stoi(h.at("medoid"));
        } else {
            t.provenance.init_index = std::stoi(h.at("init"));
            t.provenance.iterations = std::stoi(h.at("iters"));
        }
        out.push_back(std::move(t));
    }
    return out;
}

} // namespace dtwtc
