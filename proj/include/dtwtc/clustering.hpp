#pragma once

#include "dtwtc/dtw.hpp"
#include "dtwtc/time_series.hpp"

#include <iosfwd>
#include <vector>

namespace dtwtc {

/// Symmetric pairwise distance matrix with zero diagonal, tagged with the
/// distance configuration that produced it.
struct PairwiseDistances {
    std::size_t n = 0;
    std::vector<double> d; // n*n, row-major
    DistanceKind kind = DistanceKind::dtw;
    DtwParams params;

    double at(std::size_t i, std::size_t j) const { return d[i * n + j]; }
    double max_entry() const;
};

/// Computes the distance between every unordered pair once and mirrors it.
/// `threads` <= 1 runs sequentially; the result is independent of the thread
/// count.
PairwiseDistances pairwise_distances(const std::vector<TimeSeries>& samples,
                                     const DtwParams& params, DistanceKind kind,
                                     unsigned threads = 1);

/// Flat clustering of one activity's samples. Clusters are ordered by their
/// smallest member index, members ascending; together they partition
/// {0..n-1}.
struct ClusterSet {
    int label = -1;
    std::vector<std::vector<int>> clusters;
    double cut_height = 0.0; // threshold the dendrogram was cut at
};

/// Complete-linkage agglomerative clustering, merging while the cheapest
/// merge height stays <= cut * max entry of the matrix (inclusive, so
/// cut = 1 always yields a single cluster). Equal-height merge candidates are
/// resolved toward the lexicographically smallest (min member, max member)
/// pair.
ClusterSet complete_linkage_cluster(const PairwiseDistances& dists, double cut);

/// Row-major whitespace-separated text dump for inspection.
void write_distance_matrix(std::ostream& out, const PairwiseDistances& dists);

} // namespace dtwtc
