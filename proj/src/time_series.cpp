#include "dtwtc/time_series.hpp"

#include "dtwtc/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dtwtc {

TimeSeries::TimeSeries(std::vector<double> values, std::size_t dim)
    : values_(std::move(values)), dim_(dim) {
    if (dim_ == 0) throw DomainError("TimeSeries: dimension must be positive");
    if (values_.size() % dim_ != 0)
        throw DomainError("TimeSeries: value count not a multiple of dimension");
    length_ = values_.size() / dim_;
    if (length_ < 2) throw DomainError("TimeSeries: length must be >= 2");
    for (double v : values_)
        if (!std::isfinite(v)) throw DomainError("TimeSeries: non-finite value");
}

TimeSeries TimeSeries::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw DomainError("TimeSeries: no rows");
    const std::size_t dim = rows.front().size();
    std::vector<double> flat;
    flat.reserve(rows.size() * dim);
    for (const auto& r : rows) {
        if (r.size() != dim) throw DomainError("TimeSeries: ragged rows");
        flat.insert(flat.end(), r.begin(), r.end());
    }
    return TimeSeries(std::move(flat), dim);
}

TimeSeries TimeSeries::from_scalars(std::vector<double> values) {
    return TimeSeries(std::move(values), 1);
}

std::vector<double> TimeSeries::channel_ranges() const {
    std::vector<double> lo(dim_, std::numeric_limits<double>::infinity());
    std::vector<double> hi(dim_, -std::numeric_limits<double>::infinity());
    for (std::size_t t = 0; t < length_; ++t) {
        for (std::size_t d = 0; d < dim_; ++d) {
            double v = (*this)(t, d);
            lo[d] = std::min(lo[d], v);
            hi[d] = std::max(hi[d], v);
        }
    }
    std::vector<double> out(dim_);
    for (std::size_t d = 0; d < dim_; ++d) out[d] = hi[d] - lo[d];
    return out;
}

void Dataset::add(LabeledSeries sample) {
    if (!samples_.empty()) {
        if (sample.series.length() != length() || sample.series.dim() != dim())
            throw DomainError("Dataset: all series must share the same length and dimension");
    }
    samples_.push_back(std::move(sample));
}

void Dataset::set_label_name(int label, std::string name) {
    label_names_[label] = std::move(name);
}

std::size_t Dataset::length() const {
    if (samples_.empty()) throw DomainError("Dataset: empty");
    return samples_.front().series.length();
}

std::size_t Dataset::dim() const {
    if (samples_.empty()) throw DomainError("Dataset: empty");
    return samples_.front().series.dim();
}

std::set<int> Dataset::label_set() const {
    std::set<int> s;
    for (const auto& x : samples_) s.insert(x.label);
    return s;
}

std::string Dataset::label_name(int label) const {
    auto it = label_names_.find(label);
    if (it != label_names_.end()) return it->second;
    return std::to_string(label);
}

namespace {

// Empirical quantile with linear interpolation between order statistics.
double quantile_linear(std::vector<double> values, double q) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n == 1) return values[0];
    double h = q * static_cast<double>(n - 1);
    auto lo = static_cast<std::size_t>(h);
    if (lo >= n - 1) return values[n - 1];
    double frac = h - static_cast<double>(lo);
    return values[lo] + frac * (values[lo + 1] - values[lo]);
}

} // namespace

std::pair<Dataset, FlatCurveReport> remove_flat_curves(const Dataset& data, double quantile) {
    if (data.empty()) throw DomainError("remove_flat_curves: empty dataset");
    if (!(quantile > 0.0 && quantile < 1.0))
        throw DomainError("remove_flat_curves: quantile must be in (0,1)");

    const std::size_t n = data.size();
    const std::size_t p = data.dim();

    std::vector<std::vector<double>> ranges(n);
    for (std::size_t i = 0; i < n; ++i) ranges[i] = data[i].series.channel_ranges();

    FlatCurveReport report;
    report.quantile = quantile;
    report.thresholds.resize(p);
    for (std::size_t d = 0; d < p; ++d) {
        std::vector<double> col(n);
        for (std::size_t i = 0; i < n; ++i) col[i] = ranges[i][d];
        report.thresholds[d] = quantile_linear(std::move(col), quantile);
    }

    Dataset kept;
    for (const auto& [label, name] : data.label_names()) kept.set_label_name(label, name);
    for (std::size_t i = 0; i < n; ++i) {
        bool flat = true;
        for (std::size_t d = 0; d < p; ++d) {
            if (ranges[i][d] > report.thresholds[d]) { flat = false; break; }
        }
        if (flat)
            report.removed.push_back(i);
        else
            kept.add(data[i]);
    }
    return {std::move(kept), std::move(report)};
}

} // namespace dtwtc
