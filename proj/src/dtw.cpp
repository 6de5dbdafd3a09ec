#include "dtwtc/dtw.hpp"

#include "dtwtc/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dtwtc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Contiguous window into a row-major series; truncation is pointer arithmetic.
struct View {
    const double* data;
    std::size_t m;
    std::size_t p;

    const double* point(std::size_t t) const { return data + t * p; }
};

View full_view(const TimeSeries& s) { return {s.values().data(), s.length(), s.dim()}; }

// Drop `head` leading samples and `tail` trailing ones.
View slice(const View& v, std::size_t head, std::size_t tail) {
    return {v.data + head * v.p, v.m - head - tail, v.p};
}

double point_cost(const View& a, std::size_t s, const View& b, std::size_t t, bool squared) {
    const double* x = a.point(s);
    const double* y = b.point(t);
    double acc = 0.0;
    for (std::size_t d = 0; d < a.p; ++d) {
        double diff = x[d] - y[d];
        acc += diff * diff;
    }
    return squared ? acc : std::sqrt(acc);
}

void check_pair(const TimeSeries& a, const TimeSeries& b, int bandwidth) {
    if (a.length() != b.length())
        throw DomainError("dtw: series lengths differ (" + std::to_string(a.length()) +
                          " vs " + std::to_string(b.length()) + ")");
    if (a.dim() != b.dim())
        throw DomainError("dtw: series dimensions differ (" + std::to_string(a.dim()) +
                          " vs " + std::to_string(b.dim()) + ")");
    if (bandwidth < 0) throw DomainError("dtw: bandwidth must be >= 0");
}

// Two-row banded DP; O(m * min(2bw+1, m)) time, O(m) memory.
double banded_distance(const View& a, const View& b, int bw, bool squared) {
    const std::size_t m = a.m;
    const std::size_t band = static_cast<std::size_t>(bw);
    std::vector<double> prev(m, kInf), cur(m, kInf);

    const std::size_t hi0 = std::min(band, m - 1);
    cur[0] = point_cost(a, 0, b, 0, squared);
    for (std::size_t t = 1; t <= hi0; ++t) cur[t] = cur[t - 1] + point_cost(a, 0, b, t, squared);

    for (std::size_t s = 1; s < m; ++s) {
        std::swap(prev, cur);
        const std::size_t tlo = s > band ? s - band : 0;
        const std::size_t thi = std::min(s + band, m - 1);
        std::fill(cur.begin(), cur.end(), kInf);
        for (std::size_t t = tlo; t <= thi; ++t) {
            double best = prev[t]; // (s-1, t)
            if (t > 0) {
                best = std::min(best, prev[t - 1]); // (s-1, t-1)
                best = std::min(best, cur[t - 1]);  // (s, t-1)
            }
            cur[t] = point_cost(a, s, b, t, squared) + best;
        }
    }
    return cur[m - 1];
}

CostMatrix banded_matrix(const View& a, const View& b, int bw, bool squared) {
    const std::size_t m = a.m;
    const std::size_t band = static_cast<std::size_t>(bw);
    CostMatrix cm;
    cm.m = m;
    cm.bandwidth = bw;
    cm.d.assign(m * m, kInf);

    auto D = [&](std::size_t s, std::size_t t) -> double& { return cm.d[s * m + t]; };

    D(0, 0) = point_cost(a, 0, b, 0, squared);
    for (std::size_t t = 1; t <= std::min(band, m - 1); ++t)
        D(0, t) = D(0, t - 1) + point_cost(a, 0, b, t, squared);
    for (std::size_t s = 1; s <= std::min(band, m - 1); ++s)
        D(s, 0) = D(s - 1, 0) + point_cost(a, s, b, 0, squared);

    for (std::size_t s = 1; s < m; ++s) {
        const std::size_t tlo = std::max<std::size_t>(s > band ? s - band : 0, 1);
        const std::size_t thi = std::min(s + band, m - 1);
        for (std::size_t t = tlo; t <= thi; ++t) {
            double best = std::min({D(s - 1, t - 1), D(s - 1, t), D(s, t - 1)});
            D(s, t) = point_cost(a, s, b, t, squared) + best;
        }
    }
    return cm;
}

WarpingPath backtrack(const CostMatrix& cm) {
    const std::size_t m = cm.m;
    WarpingPath path;
    path.cost = cm.at(m - 1, m - 1);

    std::size_t s = m - 1, t = m - 1;
    std::vector<std::pair<int, int>> rev;
    rev.emplace_back(static_cast<int>(s), static_cast<int>(t));
    while (s != 0 || t != 0) {
        double diag = (s > 0 && t > 0) ? cm.at(s - 1, t - 1) : kInf;
        double up = s > 0 ? cm.at(s - 1, t) : kInf;
        double left = t > 0 ? cm.at(s, t - 1) : kInf;
        double best = std::min({diag, up, left});
        if (diag == best) {
            --s; --t;
        } else if (up == best) {
            --s;
        } else {
            --t;
        }
        rev.emplace_back(static_cast<int>(s), static_cast<int>(t));
    }
    path.pairs.assign(rev.rbegin(), rev.rend());
    return path;
}

} // namespace

bool is_valid_warping_path(const WarpingPath& path, std::size_t m, int bandwidth) {
    const auto& w = path.pairs;
    if (w.empty()) return false;
    if (w.front() != std::make_pair(0, 0)) return false;
    if (w.back() != std::make_pair(static_cast<int>(m) - 1, static_cast<int>(m) - 1))
        return false;
    for (const auto& [s, t] : w) {
        if (s < 0 || t < 0 || s >= static_cast<int>(m) || t >= static_cast<int>(m)) return false;
        if (std::abs(s - t) > bandwidth) return false;
    }
    for (std::size_t k = 1; k < w.size(); ++k) {
        int ds = w[k].first - w[k - 1].first;
        int dt = w[k].second - w[k - 1].second;
        bool step = (ds == 1 && dt == 0) || (ds == 0 && dt == 1) || (ds == 1 && dt == 1);
        if (!step) return false; // also rules out any decrease
    }
    return true;
}

CostMatrix cost_matrix(const TimeSeries& a, const TimeSeries& b, int bandwidth) {
    check_pair(a, b, bandwidth);
    return banded_matrix(full_view(a), full_view(b), bandwidth, false);
}

double dtw_distance(const TimeSeries& a, const TimeSeries& b, int bandwidth) {
    check_pair(a, b, bandwidth);
    return banded_distance(full_view(a), full_view(b), bandwidth, false);
}

WarpingPath dtw_path(const TimeSeries& a, const TimeSeries& b, int bandwidth) {
    check_pair(a, b, bandwidth);
    return backtrack(banded_matrix(full_view(a), full_view(b), bandwidth, false));
}

double dtw_sq_distance(const TimeSeries& a, const TimeSeries& b, int bandwidth) {
    check_pair(a, b, bandwidth);
    return banded_distance(full_view(a), full_view(b), bandwidth, true);
}

WarpingPath dtw_sq_path(const TimeSeries& a, const TimeSeries& b, int bandwidth) {
    check_pair(a, b, bandwidth);
    return backtrack(banded_matrix(full_view(a), full_view(b), bandwidth, true));
}

TimeSeries align_to(const TimeSeries& reference, const TimeSeries& moving, int bandwidth) {
    WarpingPath path = dtw_path(reference, moving, bandwidth);
    const std::size_t m = reference.length();
    const std::size_t p = reference.dim();
    std::vector<double> acc(m * p, 0.0);
    std::vector<std::size_t> count(m, 0);
    for (const auto& [s, t] : path.pairs) {
        auto row = moving.row(static_cast<std::size_t>(t));
        for (std::size_t d = 0; d < p; ++d) acc[static_cast<std::size_t>(s) * p + d] += row[d];
        ++count[static_cast<std::size_t>(s)];
    }
    // continuity guarantees every reference index appears on the path
    for (std::size_t s = 0; s < m; ++s)
        for (std::size_t d = 0; d < p; ++d) acc[s * p + d] /= static_cast<double>(count[s]);
    return TimeSeries(std::move(acc), p);
}

double dtwsubseq_distance(const TimeSeries& a, const TimeSeries& b,
                          int displacement_window, int bandwidth) {
    check_pair(a, b, bandwidth);
    const std::size_t m = a.length();
    if (displacement_window < 1 || static_cast<std::size_t>(displacement_window) > m - 1)
        throw DomainError("dtwsubseq: displacement window must be in [1, m-1]");

    const View va = full_view(a);
    const View vb = full_view(b);
    double best = kInf;
    for (int dir = 0; dir < 2; ++dir) {
        const View& head = dir == 0 ? va : vb; // loses its first k-1 samples
        const View& tail = dir == 0 ? vb : va; // loses its last k-1 samples
        // k = 1 is direction-independent; evaluate it once.
        for (int k = 1 + dir; k <= displacement_window; ++k) {
            const std::size_t cut = static_cast<std::size_t>(k - 1);
            double d = banded_distance(slice(head, cut, 0), slice(tail, 0, cut),
                                       bandwidth, false);
            double weighted = static_cast<double>(m) / static_cast<double>(m - cut) * d;
            best = std::min(best, weighted);
        }
    }
    return best;
}

double series_distance(const TimeSeries& a, const TimeSeries& b,
                       const DtwParams& params, DistanceKind kind) {
    if (kind == DistanceKind::dtw) return dtw_distance(a, b, params.bandwidth);
    return dtwsubseq_distance(a, b, params.displacement_window, params.bandwidth);
}

} // namespace dtwtc
