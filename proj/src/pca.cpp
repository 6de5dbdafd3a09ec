#include "dtwtc/pca.hpp"

#include "dtwtc/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dtwtc {

void jacobi_eigen_symmetric(const Matrix& sym, std::vector<double>& eigenvalues,
                            Matrix& eigenvectors) {
    const std::size_t n = sym.rows;
    Matrix a = sym;
    Matrix v(n, n);
    for (std::size_t i = 0; i < n; ++i) v.at(i, i) = 1.0;

    auto off_diag_norm = [&]() {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) s += a.at(i, j) * a.at(i, j);
        return std::sqrt(2.0 * s);
    };

    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::abs(a.at(i, i)));
    scale = std::max(scale, off_diag_norm());
    const double stop = std::max(scale, 1.0) * 1e-14;

    for (int sweep = 0; sweep < 100 && off_diag_norm() > stop; ++sweep) {
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double apq = a.at(p, q);
                if (std::abs(apq) <= stop * 1e-3) continue;
                double app = a.at(p, p), aqq = a.at(q, q);
                double theta = (aqq - app) / (2.0 * apq);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;

                for (std::size_t k = 0; k < n; ++k) {
                    double akp = a.at(k, p), akq = a.at(k, q);
                    a.at(k, p) = c * akp - s * akq;
                    a.at(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double apk = a.at(p, k), aqk = a.at(q, k);
                    a.at(p, k) = c * apk - s * aqk;
                    a.at(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double vkp = v.at(k, p), vkq = v.at(k, q);
                    v.at(k, p) = c * vkp - s * vkq;
                    v.at(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a.at(i, i) > a.at(j, j); });

    eigenvalues.resize(n);
    eigenvectors = Matrix(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        eigenvalues[r] = a.at(order[r], order[r]);
        // canonical sign: first component of largest magnitude is positive
        std::size_t arg = 0;
        double mx = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            double mag = std::abs(v.at(k, order[r]));
            if (mag > mx) { mx = mag; arg = k; }
        }
        double sign = v.at(arg, order[r]) < 0.0 ? -1.0 : 1.0;
        for (std::size_t k = 0; k < n; ++k) eigenvectors.at(r, k) = sign * v.at(k, order[r]);
    }
}

PcaModel fit_pca(const Matrix& features, double variance_retained) {
    if (features.rows < 2) throw DomainError("fit_pca: need at least 2 samples");
    if (!(variance_retained > 0.0 && variance_retained <= 1.0))
        throw DomainError("fit_pca: variance_retained must be in (0,1]");

    const std::size_t n = features.rows;
    const std::size_t f = features.cols;

    PcaModel model;
    model.mean.assign(f, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < f; ++j) model.mean[j] += features.at(i, j);
    for (double& m : model.mean) m /= static_cast<double>(n);

    Matrix cov(f, f);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < f; ++j) {
            double cj = features.at(i, j) - model.mean[j];
            for (std::size_t k = j; k < f; ++k)
                cov.at(j, k) += cj * (features.at(i, k) - model.mean[k]);
        }
    }
    for (std::size_t j = 0; j < f; ++j)
        for (std::size_t k = j; k < f; ++k) {
            double v = cov.at(j, k) / static_cast<double>(n - 1);
            cov.at(j, k) = v;
            cov.at(k, j) = v;
        }

    Matrix vectors;
    jacobi_eigen_symmetric(cov, model.explained, vectors);
    // clamp round-off: negatives and values below numerical rank are zero
    double top = model.explained.empty() ? 0.0 : std::max(model.explained.front(), 0.0);
    for (double& ev : model.explained) ev = ev < top * 1e-12 ? 0.0 : ev;

    double total = std::accumulate(model.explained.begin(), model.explained.end(), 0.0);
    std::size_t r = 1;
    if (total > 0.0) {
        double cum = 0.0;
        for (r = 0; r < f;) {
            cum += model.explained[r];
            ++r;
            if (cum / total >= variance_retained) break;
        }
    }
    model.retained = r;
    model.components = Matrix(r, f);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < f; ++j) model.components.at(i, j) = vectors.at(i, j);
    return model;
}

std::vector<double> PcaModel::project(const std::vector<double>& x) const {
    if (x.size() != mean.size()) throw DomainError("PcaModel::project: wrong feature length");
    std::vector<double> out(retained, 0.0);
    for (std::size_t i = 0; i < retained; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < mean.size(); ++j)
            acc += components.at(i, j) * (x[j] - mean[j]);
        out[i] = acc;
    }
    return out;
}

Matrix PcaModel::project_all(const Matrix& X) const {
    Matrix out(X.rows, retained);
    for (std::size_t r = 0; r < X.rows; ++r) {
        std::vector<double> x(X.row(r), X.row(r) + X.cols);
        auto proj = project(x);
        for (std::size_t c = 0; c < retained; ++c) out.at(r, c) = proj[c];
    }
    return out;
}

} // namespace dtwtc
