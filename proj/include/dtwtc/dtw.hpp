#pragma once

#include "dtwtc/time_series.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace dtwtc {

enum class DistanceKind { dtw, dtwsubseq };

struct DtwParams {
    int bandwidth = 0;           // Sakoe-Chiba band radius, >= 0
    int displacement_window = 1; // max horizontal displacement searched by dtwsubseq, >= 1
};

/// Monotone, continuous index-pair sequence through the DP grid. Pairs are
/// 0-based; for plain DTW the path runs (0,0) .. (m-1,m-1).
struct WarpingPath {
    std::vector<std::pair<int, int>> pairs;
    double cost = 0.0;
};

/// Checks boundary, monotonicity, continuity and the band constraint.
bool is_valid_warping_path(const WarpingPath& path, std::size_t m, int bandwidth);

/// Banded accumulated-cost matrix. Cells with |s - t| > bandwidth hold an
/// infinity sentinel; cell (0,0) is the pointwise distance of the first
/// elements.
struct CostMatrix {
    std::size_t m = 0;
    int bandwidth = 0;
    std::vector<double> d; // m*m, row-major

    double at(std::size_t s, std::size_t t) const { return d[s * m + t]; }
};

CostMatrix cost_matrix(const TimeSeries& a, const TimeSeries& b, int bandwidth);

/// Banded DTW distance: accumulated Euclidean pointwise distance along the
/// optimal warping path. With bandwidth >= m-1 this is the exact
/// unconstrained DTWD.
double dtw_distance(const TimeSeries& a, const TimeSeries& b, int bandwidth);

/// Optimal warping path via predecessor backtracking. Ties prefer the
/// diagonal step, then (s-1,t), then (s,t-1), so identical series map to the
/// main diagonal.
WarpingPath dtw_path(const TimeSeries& a, const TimeSeries& b, int bandwidth);

/// Warps `moving` onto the time axis of `reference`: the output value at
/// reference index s is the mean of all moving values matched to s by the
/// optimal path.
TimeSeries align_to(const TimeSeries& reference, const TimeSeries& moving, int bandwidth);

/// Subsequence DTW distance: min over displacements k in {1..dw} and both
/// shift directions of the length-weighted banded DTWD of the truncated pair,
/// weight m/(m-k+1). At k = 1 this equals dtw_distance, so the result never
/// exceeds the plain distance. Symmetric by construction.
double dtwsubseq_distance(const TimeSeries& a, const TimeSeries& b,
                          int displacement_window, int bandwidth);

/// Dispatch on the configured distance kind.
double series_distance(const TimeSeries& a, const TimeSeries& b,
                       const DtwParams& params, DistanceKind kind);

// Squared-pointwise-cost variants used by template averaging: the barycenter
// mean update is a strict descent step only under squared ground costs.
double dtw_sq_distance(const TimeSeries& a, const TimeSeries& b, int bandwidth);
WarpingPath dtw_sq_path(const TimeSeries& a, const TimeSeries& b, int bandwidth);

} // namespace dtwtc
