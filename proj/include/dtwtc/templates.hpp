#pragma once

#include "dtwtc/clustering.hpp"
#include "dtwtc/dtw.hpp"
#include "dtwtc/time_series.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dtwtc {

enum class AveragingMethod { dpa, dba };

std::string to_string(AveragingMethod m);
std::string to_string(DistanceKind k);
AveragingMethod averaging_method_from_string(const std::string& s);
DistanceKind distance_kind_from_string(const std::string& s);

struct TemplateProvenance {
    int cluster_size = 0;
    int medoid_index = -1; // DPA: index within the cluster
    int init_index = -1;   // DBA: random initial member
    int iterations = 0;    // DBA: update steps performed
    // DBA objective after init and after each update; non-increasing.
    std::vector<double> objective_history;
};

/// Averaged representative series of one cluster, tagged with its activity.
struct Template {
    TimeSeries series;
    int label = -1;
    AveragingMethod method = AveragingMethod::dpa;
    TemplateProvenance provenance;
};

/// DTW pointwise averaging: pick the medoid under DTWsubseqD (ties toward the
/// lowest index), align every member to it with plain DTW, return the
/// pointwise mean of the aligned members.
Template dpa_template(const std::vector<TimeSeries>& cluster, const DtwParams& params);

struct DbaOptions {
    int max_iters = 10;
    double tol = 1e-6; // relative objective decrease that counts as converged
    std::uint64_t seed = 0;
};

/// DTW barycenter averaging: from a seeded random member, repeatedly re-align
/// all members to the current average and replace each coordinate by the mean
/// of its matched values. Paths and the recorded objective use squared
/// pointwise costs, which makes the objective non-increasing.
Template dba_template(const std::vector<TimeSeries>& cluster, const DtwParams& params,
                      const DbaOptions& options);

/// One activity's clusters with their member series materialized.
struct ActivityClusters {
    int label = -1;
    std::vector<std::vector<TimeSeries>> clusters;
};

/// One template per cluster, in activity-major, cluster-index order.
/// Per-cluster DBA seeds are derived from `seed` and the template position,
/// so reruns are bit-identical.
std::vector<Template> build_templates(const std::vector<ActivityClusters>& activities,
                                      AveragingMethod method, const DtwParams& params,
                                      std::uint64_t seed, int dba_max_iters = 10,
                                      double dba_tol = 1e-6);

/// Versioned line-oriented text persistence; 17-significant-digit values, so
/// write/read round-trips are bit-exact. Lines starting with '#' before the
/// set header are ignored.
void write_template_set(std::ostream& out, const std::vector<Template>& templates);
std::vector<Template> read_template_set(std::istream& in);

} // namespace dtwtc
