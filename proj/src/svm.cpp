#include "dtwtc/svm.hpp"

#include "dtwtc/error.hpp"
#include "dtwtc/rand.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace dtwtc {

std::vector<double> SvmModel::decision(const std::vector<double>& x) const {
    if (x.size() != weights.cols) throw DomainError("SvmModel::decision: wrong feature length");
    std::vector<double> out(classes.size());
    for (std::size_t c = 0; c < classes.size(); ++c) {
        double acc = bias[c];
        for (std::size_t j = 0; j < x.size(); ++j) acc += weights.at(c, j) * x[j];
        out[c] = acc;
    }
    return out;
}

int SvmModel::predict(const std::vector<double>& x) const {
    auto dec = decision(x);
    std::size_t best = 0;
    for (std::size_t c = 1; c < dec.size(); ++c)
        if (dec[c] > dec[best]) best = c; // strict, so ties keep the lowest class id
    return classes[best];
}

SvmModel fit_svm(const Matrix& X, const std::vector<int>& labels, double C,
                 int epochs, std::uint64_t seed) {
    if (X.rows != labels.size()) throw DomainError("fit_svm: label count mismatch");
    if (X.rows < 2) throw DomainError("fit_svm: need at least 2 samples");
    if (!(C > 0.0)) throw DomainError("fit_svm: C must be positive");
    if (epochs < 1) throw DomainError("fit_svm: epochs must be >= 1");

    std::set<int> class_set(labels.begin(), labels.end());
    if (class_set.size() < 2) throw DomainError("fit_svm: need at least 2 classes");

    SvmModel model;
    model.classes.assign(class_set.begin(), class_set.end());
    model.C = C;
    const std::size_t n = X.rows;
    const std::size_t dim = X.cols;
    const std::size_t aug = dim + 1; // constant feature carries the bias
    model.weights = Matrix(model.classes.size(), dim);
    model.bias.assign(model.classes.size(), 0.0);

    const double lambda = 1.0 / (static_cast<double>(n) * C);

    for (std::size_t ci = 0; ci < model.classes.size(); ++ci) {
        const int cls = model.classes[ci];
        std::vector<double> w(aug, 0.0);
        Rng rng(mix_seed(seed, 2, ci));
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);

        std::size_t t = 0;
        for (int epoch = 0; epoch < epochs; ++epoch) {
            rng.shuffle(order);
            for (std::size_t i : order) {
                ++t;
                const double eta = 1.0 / (lambda * static_cast<double>(t));
                const double y = labels[i] == cls ? 1.0 : -1.0;
                const double* x = X.row(i);
                double margin = w[dim];
                for (std::size_t j = 0; j < dim; ++j) margin += w[j] * x[j];
                margin *= y;

                const double shrink = 1.0 - eta * lambda;
                for (double& wj : w) wj *= shrink;
                if (margin < 1.0) {
                    for (std::size_t j = 0; j < dim; ++j) w[j] += eta * y * x[j];
                    w[dim] += eta * y;
                }
            }
        }
        for (std::size_t j = 0; j < dim; ++j) model.weights.at(ci, j) = w[j];
        model.bias[ci] = w[dim];
    }

    // regularized hinge objective, summed over the one-vs-rest problems
    double objective = 0.0;
    for (std::size_t ci = 0; ci < model.classes.size(); ++ci) {
        double norm_sq = 0.0;
        for (std::size_t j = 0; j < dim; ++j)
            norm_sq += model.weights.at(ci, j) * model.weights.at(ci, j);
        double hinge = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double y = labels[i] == model.classes[ci] ? 1.0 : -1.0;
            double dec = model.bias[ci];
            const double* x = X.row(i);
            for (std::size_t j = 0; j < dim; ++j) dec += model.weights.at(ci, j) * x[j];
            hinge += std::max(0.0, 1.0 - y * dec);
        }
        objective += 0.5 * norm_sq + C * hinge;
    }
    model.objective = objective;
    return model;
}

} // namespace dtwtc
