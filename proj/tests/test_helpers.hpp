#pragma once

#include "dtwtc/rand.hpp"
#include "dtwtc/time_series.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <string>
#include <unistd.h>
#include <vector>

namespace testutil {

inline bool approx_eq(double a, double b, double tol) { return std::abs(a - b) <= tol; }

inline dtwtc::TimeSeries random_series(dtwtc::Rng& rng, std::size_t m, std::size_t p,
                                       double lo = -1.0, double hi = 1.0) {
    std::vector<double> v(m * p);
    for (double& x : v) x = lo + (hi - lo) * rng.uniform_real();
    return dtwtc::TimeSeries(std::move(v), p);
}

inline double point_dist(const dtwtc::TimeSeries& a, std::size_t s, const dtwtc::TimeSeries& b,
                         std::size_t t) {
    double acc = 0.0;
    for (std::size_t d = 0; d < a.dim(); ++d) {
        double diff = a(s, d) - b(t, d);
        acc += diff * diff;
    }
    return std::sqrt(acc);
}

// Exhaustive-path-enumeration DTW oracle: walks every monotone, continuous
// path from (0,0) to (m-1,m-1) and keeps the cheapest total. Deliberately no
// memoization so it shares nothing with the DP under test.
inline double enumerate_dtw(const dtwtc::TimeSeries& a, const dtwtc::TimeSeries& b) {
    const std::size_t m = a.length();
    double best = std::numeric_limits<double>::infinity();
    // explicit stack of (s, t, accumulated)
    struct Node { std::size_t s, t; double acc; };
    std::vector<Node> stack{{0, 0, point_dist(a, 0, b, 0)}};
    while (!stack.empty()) {
        Node n = stack.back();
        stack.pop_back();
        if (n.s == m - 1 && n.t == m - 1) {
            best = std::min(best, n.acc);
            continue;
        }
        if (n.s + 1 < m && n.t + 1 < m)
            stack.push_back({n.s + 1, n.t + 1, n.acc + point_dist(a, n.s + 1, b, n.t + 1)});
        if (n.s + 1 < m)
            stack.push_back({n.s + 1, n.t, n.acc + point_dist(a, n.s + 1, b, n.t)});
        if (n.t + 1 < m)
            stack.push_back({n.s, n.t + 1, n.acc + point_dist(a, n.s, b, n.t + 1)});
    }
    return best;
}

// Independent full (unbanded) DP, written the textbook way on a padded grid.
inline double full_dp_dtw(const dtwtc::TimeSeries& a, const dtwtc::TimeSeries& b) {
    const std::size_t m = a.length();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> D(m + 1, std::vector<double>(m + 1, inf));
    D[0][0] = 0.0;
    for (std::size_t s = 1; s <= m; ++s)
        for (std::size_t t = 1; t <= m; ++t)
            D[s][t] = point_dist(a, s - 1, b, t - 1) +
                      std::min({D[s - 1][t - 1], D[s - 1][t], D[s][t - 1]});
    return D[m][m];
}

// O(N^2) discrete Fourier transform oracle.
inline std::vector<std::complex<double>> naive_dft(const std::vector<std::complex<double>>& x,
                                                   bool inverse = false) {
    const std::size_t n = x.size();
    const double sign = inverse ? 1.0 : -1.0;
    std::vector<std::complex<double>> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc(0.0, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            double angle = sign * 2.0 * M_PI * static_cast<double>(k) *
                           static_cast<double>(j) / static_cast<double>(n);
            acc += x[j] * std::complex<double>(std::cos(angle), std::sin(angle));
        }
        out[k] = inverse ? acc / static_cast<double>(n) : acc;
    }
    return out;
}

// Definitional complete-linkage agglomeration: cluster distances recomputed
// from the raw matrix at every step (no height updates), merging while the
// cheapest pair stays within the threshold, ties toward the smallest
// (min member, max member) pair. Returns clusters sorted by smallest member.
inline std::vector<std::vector<int>> brute_force_complete_linkage(
    const std::vector<double>& dist, std::size_t n, double threshold) {
    auto at = [&](int i, int j) { return dist[static_cast<std::size_t>(i) * n + j]; };
    std::vector<std::vector<int>> clusters(n);
    for (std::size_t i = 0; i < n; ++i) clusters[i] = {static_cast<int>(i)};

    auto linkage = [&](const std::vector<int>& A, const std::vector<int>& B) {
        double mx = 0.0;
        for (int x : A)
            for (int y : B) mx = std::max(mx, at(x, y));
        return mx;
    };

    while (clusters.size() > 1) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t bi = clusters.size(), bj = clusters.size();
        for (std::size_t i = 0; i < clusters.size(); ++i) {
            for (std::size_t j = i + 1; j < clusters.size(); ++j) {
                double h = linkage(clusters[i], clusters[j]);
                if (h > threshold) continue;
                std::pair<int, int> key{std::min(clusters[i][0], clusters[j][0]),
                                        std::max(clusters[i][0], clusters[j][0])};
                bool better = h < best;
                if (!better && h == best && bi < clusters.size()) {
                    std::pair<int, int> bkey{std::min(clusters[bi][0], clusters[bj][0]),
                                             std::max(clusters[bi][0], clusters[bj][0])};
                    better = key < bkey;
                }
                if (better) { best = h; bi = i; bj = j; }
            }
        }
        if (bi == clusters.size()) break;
        clusters[bi].insert(clusters[bi].end(), clusters[bj].begin(), clusters[bj].end());
        std::sort(clusters[bi].begin(), clusters[bi].end());
        clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bj));
    }
    std::sort(clusters.begin(), clusters.end(),
              [](const auto& a, const auto& b) { return a[0] < b[0]; });
    return clusters;
}

// Scoped temporary directory.
struct TempDir {
    std::filesystem::path path;

    explicit TempDir(const std::string& tag) {
        path = std::filesystem::temp_directory_path() /
               ("dtwtc_" + tag + "_" + std::to_string(::getpid()));
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
};

} // namespace testutil
