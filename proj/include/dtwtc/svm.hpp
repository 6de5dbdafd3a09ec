#pragma once

#include "dtwtc/pca.hpp"

#include <cstdint>
#include <vector>

namespace dtwtc {

/// One-vs-rest linear soft-margin classifier. Prediction is the argmax of
/// per-class decision values; exact ties resolve to the lowest class id.
struct SvmModel {
    std::vector<int> classes;   // ascending
    Matrix weights;             // classes x feature dim
    std::vector<double> bias;   // one per class
    double C = 1.0;
    double objective = 0.0;     // summed regularized hinge objective at the end of training

    std::vector<double> decision(const std::vector<double>& x) const;
    int predict(const std::vector<double>& x) const;
};

/// Deterministic seeded subgradient training (Pegasos-style schedule) of the
/// regularized hinge objective 0.5*||w||^2 + C * sum hinge, one binary
/// problem per class.
SvmModel fit_svm(const Matrix& X, const std::vector<int>& labels, double C,
                 int epochs, std::uint64_t seed);

} // namespace dtwtc
