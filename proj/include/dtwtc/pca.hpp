#pragma once

#include <cstddef>
#include <vector>

namespace dtwtc {

/// Dense row-major matrix, just enough for the classifier stages.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> v;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), v(r * c, 0.0) {}

    double& at(std::size_t r, std::size_t c) { return v[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return v[r * cols + c]; }
    const double* row(std::size_t r) const { return v.data() + r * cols; }
};

/// Principal components of mean-centered features. Component rows are
/// orthonormal and ordered by decreasing explained variance.
struct PcaModel {
    std::vector<double> mean;              // length f
    Matrix components;                     // retained x f
    std::vector<double> explained;         // all f eigenvalues, non-increasing
    std::size_t retained = 0;

    std::vector<double> project(const std::vector<double>& x) const;
    Matrix project_all(const Matrix& X) const;
};

/// Eigen-decomposition of the sample covariance (denominator n-1); retains
/// the smallest component count whose cumulative explained variance reaches
/// `variance_retained`.
PcaModel fit_pca(const Matrix& features, double variance_retained);

// Cyclic Jacobi sweeps for a symmetric matrix. Returns eigenvalues sorted
// descending with matching eigenvector rows. Exposed for reuse in tests.
void jacobi_eigen_symmetric(const Matrix& sym, std::vector<double>& eigenvalues,
                            Matrix& eigenvectors);

} // namespace dtwtc
