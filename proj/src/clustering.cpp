#include "dtwtc/clustering.hpp"

#include "dtwtc/dataset_io.hpp"
#include "dtwtc/error.hpp"

#include <algorithm>
#include <limits>
#include <ostream>
#include <thread>

namespace dtwtc {

double PairwiseDistances::max_entry() const {
    double mx = 0.0;
    for (double v : d) mx = std::max(mx, v);
    return mx;
}

PairwiseDistances pairwise_distances(const std::vector<TimeSeries>& samples,
                                     const DtwParams& params, DistanceKind kind,
                                     unsigned threads) {
    if (samples.empty()) throw DomainError("pairwise_distances: no samples");
    const std::size_t n = samples.size();
    for (const auto& s : samples) {
        if (s.length() != samples.front().length() || s.dim() != samples.front().dim())
            throw DomainError("pairwise_distances: inconsistent sample shapes");
    }

    PairwiseDistances out;
    out.n = n;
    out.kind = kind;
    out.params = params;
    out.d.assign(n * n, 0.0);

    // Flattened upper triangle; each worker owns a contiguous slab of pair
    // indices, so writes never collide and the result is thread-count
    // independent.
    const std::size_t total = n * (n - 1) / 2;
    auto pair_at = [n](std::size_t idx) {
        // row-by-row walk is fine at these n
        std::size_t i = 0, remaining = idx;
        std::size_t row_len = n - 1;
        while (remaining >= row_len) {
            remaining -= row_len;
            ++i;
            --row_len;
        }
        return std::make_pair(i, i + 1 + remaining);
    };
    auto work = [&](std::size_t begin, std::size_t end) {
        if (begin >= end) return;
        auto [i, j] = pair_at(begin);
        for (std::size_t idx = begin; idx < end; ++idx) {
            double v = series_distance(samples[i], samples[j], params, kind);
            out.d[i * n + j] = v;
            out.d[j * n + i] = v;
            if (++j == n) { ++i; j = i + 1; }
        }
    };

    unsigned workers = threads <= 1 ? 1 : std::min<std::size_t>(threads, total ? total : 1);
    if (workers <= 1 || total == 0) {
        work(0, total);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (total + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            std::size_t begin = w * chunk;
            std::size_t end = std::min(total, begin + chunk);
            pool.emplace_back(work, begin, end);
        }
        for (auto& t : pool) t.join();
    }
    return out;
}

ClusterSet complete_linkage_cluster(const PairwiseDistances& dists, double cut) {
    if (!(cut > 0.0 && cut <= 1.0))
        throw DomainError("complete_linkage_cluster: cut must be in (0,1]");
    const std::size_t n = dists.n;
    if (n == 0) throw DomainError("complete_linkage_cluster: empty distance matrix");

    const double threshold = cut * dists.max_entry();

    // Naive agglomeration: active clusters, complete-linkage heights updated
    // by max (exact, not an approximation).
    std::vector<std::vector<int>> clusters(n);
    for (std::size_t i = 0; i < n; ++i) clusters[i] = {static_cast<int>(i)};
    std::vector<std::vector<double>> height(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) height[i][j] = dists.at(i, j);
    std::vector<bool> active(n, true);

    auto key_of = [&](std::size_t c) { return clusters[c].front(); }; // min member, kept sorted

    while (true) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t bi = n, bj = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (!active[i]) continue;
            for (std::size_t j = i + 1; j < n; ++j) {
                if (!active[j]) continue;
                double h = height[i][j];
                if (h > threshold) continue;
                int lo = std::min(key_of(i), key_of(j));
                int hi = std::max(key_of(i), key_of(j));
                bool better = h < best;
                if (!better && h == best && bi < n) {
                    int blo = std::min(key_of(bi), key_of(bj));
                    int bhi = std::max(key_of(bi), key_of(bj));
                    better = std::make_pair(lo, hi) < std::make_pair(blo, bhi);
                }
                if (better) { best = h; bi = i; bj = j; }
            }
        }
        if (bi == n) break;

        clusters[bi].insert(clusters[bi].end(), clusters[bj].begin(), clusters[bj].end());
        std::sort(clusters[bi].begin(), clusters[bi].end());
        clusters[bj].clear();
        active[bj] = false;
        for (std::size_t k = 0; k < n; ++k) {
            if (!active[k] || k == bi) continue;
            double h = std::max(height[bi][k], height[bj][k]);
            height[bi][k] = height[k][bi] = h;
        }
    }

    ClusterSet out;
    out.cut_height = threshold;
    for (std::size_t i = 0; i < n; ++i)
        if (active[i]) out.clusters.push_back(std::move(clusters[i]));
    std::sort(out.clusters.begin(), out.clusters.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return out;
}

void write_distance_matrix(std::ostream& out, const PairwiseDistances& dists) {
    for (std::size_t i = 0; i < dists.n; ++i) {
        for (std::size_t j = 0; j < dists.n; ++j) {
            if (j) out << ' ';
            out << format_g17(dists.at(i, j));
        }
        out << '\n';
    }
}

} // namespace dtwtc
