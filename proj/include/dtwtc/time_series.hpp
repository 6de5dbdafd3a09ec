#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace dtwtc {

/// Fixed-length, p-dimensional, uniformly sampled sequence. Immutable after
/// construction; every value is validated finite and the length must be >= 2
/// (the DP recurrences index s-1).
class TimeSeries {
public:
    // Row-major values, length*dim entries.
    TimeSeries(std::vector<double> values, std::size_t dim);

    static TimeSeries from_rows(const std::vector<std::vector<double>>& rows);
    // Univariate convenience (p = 1).
    static TimeSeries from_scalars(std::vector<double> values);

    std::size_t length() const { return length_; }
    std::size_t dim() const { return dim_; }

    double operator()(std::size_t t, std::size_t d) const {
        return values_[t * dim_ + d];
    }
    std::span<const double> row(std::size_t t) const {
        return {values_.data() + t * dim_, dim_};
    }
    const std::vector<double>& values() const { return values_; }

    // Per-dimension range (max - min) along time.
    std::vector<double> channel_ranges() const;

    bool operator==(const TimeSeries&) const = default;

private:
    std::vector<double> values_;
    std::size_t length_ = 0;
    std::size_t dim_ = 0;
};

struct LabeledSeries {
    TimeSeries series;
    int label = 0;
    std::optional<int> subject;
};

/// Ordered collection of labeled series, all sharing the same length and
/// dimension, plus optional display names per label.
class Dataset {
public:
    Dataset() = default;

    void add(LabeledSeries sample);
    void set_label_name(int label, std::string name);

    std::size_t size() const { return samples_.size(); }
    bool empty() const { return samples_.empty(); }
    std::size_t length() const;
    std::size_t dim() const;

    const LabeledSeries& operator[](std::size_t i) const { return samples_[i]; }
    const std::vector<LabeledSeries>& samples() const { return samples_; }

    std::set<int> label_set() const;
    const std::map<int, std::string>& label_names() const { return label_names_; }
    std::string label_name(int label) const;

private:
    std::vector<LabeledSeries> samples_;
    std::map<int, std::string> label_names_;
};

struct FlatCurveReport {
    double quantile = 0.0;
    std::vector<double> thresholds;       // one per dimension, >= 0
    std::vector<std::size_t> removed;     // indices into the input dataset, ascending
};

/// Removes samples whose range falls within the given quantile of ranges in
/// *every* dimension. Thresholds are empirical quantiles (linear interpolation
/// between order statistics) computed once from the input dataset; ties at the
/// threshold count as flat (<=).
std::pair<Dataset, FlatCurveReport> remove_flat_curves(const Dataset& data, double quantile);

} // namespace dtwtc
