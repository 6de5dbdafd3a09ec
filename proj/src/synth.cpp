#include "dtwtc/synth.hpp"

#include "dtwtc/error.hpp"
#include "dtwtc/fft.hpp"

#include <cmath>

namespace dtwtc {

void SynthConfig::validate() const {
    if (sources.empty()) throw DomainError("synth: no source templates");
    if (output_length < 2) throw DomainError("synth: output length must be >= 2");
    if (fft_length <= 0 || (fft_length & (fft_length - 1)) != 0)
        throw DomainError("synth: fft length must be a power of two");
    if (fft_length < 2 * output_length)
        throw DomainError("synth: fft length must be >= 2 * output length");
    if (noise_length < 1 || noise_length > fft_length)
        throw DomainError("synth: noise length must be in [1, fft length]");
    if (noise_stddev < 0.0) throw DomainError("synth: noise deviation must be >= 0");
    if (train_per_activity < 1) throw DomainError("synth: train samples per activity must be >= 1");
    if (test_per_activity < 0) throw DomainError("synth: test samples per activity must be >= 0");
    for (std::size_t a = 0; a < sources.size(); ++a) {
        if (sources[a].empty())
            throw DomainError("synth: activity " + std::to_string(a) + " has no source template");
        if (test_per_activity > 0 && sources[a].size() < 2)
            throw DomainError("synth: activity " + std::to_string(a) +
                              " needs a second source template for the test split");
        for (const auto& s : sources[a]) {
            if (s.dim() != 1) throw DomainError("synth: source templates must be univariate");
            if (s.length() != static_cast<std::size_t>(output_length))
                throw DomainError("synth: source template length must equal the output length");
        }
    }
}

TimeSeries generate_sample(const TimeSeries& source, const SynthConfig& config, Rng& rng,
                           SampleTrace* trace) {
    if (source.dim() != 1) throw DomainError("generate_sample: source must be univariate");
    if (source.length() != static_cast<std::size_t>(config.output_length))
        throw DomainError("generate_sample: source length must equal the output length");

    const std::size_t m = source.length();
    const std::size_t n = static_cast<std::size_t>(config.fft_length);

    // zero mean, unit variance
    double mean = 0.0;
    for (std::size_t t = 0; t < m; ++t) mean += source(t, 0);
    mean /= static_cast<double>(m);
    double var = 0.0;
    for (std::size_t t = 0; t < m; ++t) {
        double c = source(t, 0) - mean;
        var += c * c;
    }
    var /= static_cast<double>(m);
    if (var <= 0.0) throw DomainError("generate_sample: source template is constant");
    const double inv_std = 1.0 / std::sqrt(var);

    // tile the normalized template out to the transform length
    std::vector<std::complex<double>> spectrum(n);
    for (std::size_t i = 0; i < n; ++i)
        spectrum[i] = (source(i % m, 0) - mean) * inv_std;
    spectrum = fft(std::move(spectrum));

    std::vector<std::complex<double>> noise(static_cast<std::size_t>(config.noise_length));
    for (auto& v : noise) {
        double re = rng.gaussian(0.0, config.noise_stddev);
        double im = config.noise_complex ? rng.gaussian(0.0, config.noise_stddev) : 0.0;
        v = {re, im};
    }
    const int noise_offset = static_cast<int>(
        rng.uniform_index(static_cast<std::size_t>(config.fft_length - config.noise_length + 1)));
    for (std::size_t j = 0; j < noise.size(); ++j)
        spectrum[static_cast<std::size_t>(noise_offset) + j] += noise[j];

    auto time_domain = ifft(std::move(spectrum));
    std::vector<double> prewindow(n);
    for (std::size_t i = 0; i < n; ++i) prewindow[i] = time_domain[i].real();

    const int window_offset = static_cast<int>(
        rng.uniform_index(static_cast<std::size_t>(config.fft_length - config.output_length + 1)));
    std::vector<double> out(static_cast<std::size_t>(config.output_length));
    for (std::size_t t = 0; t < out.size(); ++t)
        out[t] = prewindow[static_cast<std::size_t>(window_offset) + t];

    if (trace) {
        trace->window_offset = window_offset;
        trace->noise_offset = noise_offset;
        trace->noise = std::move(noise);
        trace->prewindow = std::move(prewindow);
    }
    return TimeSeries(std::move(out), 1);
}

SynthResult generate_dataset(const SynthConfig& config) {
    config.validate();
    const int activities = static_cast<int>(config.sources.size());

    SynthResult result;
    auto name_of = [&](int a) {
        if (a < static_cast<int>(config.activity_names.size())) return config.activity_names[a];
        return std::string("activity") + std::to_string(a);
    };
    for (int a = 0; a < activities; ++a) {
        result.train.set_label_name(a, name_of(a));
        if (config.test_per_activity > 0) result.test.set_label_name(a, name_of(a));
    }

    // split 0 = train, 1 = test; per-sample substreams keep generation order
    // irrelevant
    for (int split = 0; split < 2; ++split) {
        const int per = split == 0 ? config.train_per_activity : config.test_per_activity;
        Dataset& target = split == 0 ? result.train : result.test;
        for (int a = 0; a < activities; ++a) {
            const TimeSeries& source = config.sources[static_cast<std::size_t>(a)]
                                                      [split == 0 ? 0 : 1];
            for (int i = 0; i < per; ++i) {
                const std::uint64_t global =
                    static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(per) +
                    static_cast<std::uint64_t>(i);
                Rng rng(mix_seed(config.seed, static_cast<std::uint64_t>(split), global));
                SampleTrace trace;
                TimeSeries sample = generate_sample(source, config, rng, &trace);
                target.add(LabeledSeries{std::move(sample), a, std::nullopt});
                result.manifest.push_back(SynthManifestEntry{split == 0 ? "train" : "test", a, i,
                                                             trace.window_offset,
                                                             trace.noise_offset});
            }
        }
    }
    return result;
}

namespace {

// theta = 2*pi*cycles*t/length
double harmonic(double cycles, std::size_t t, std::size_t length, double phase) {
    return std::sin(2.0 * M_PI * cycles * static_cast<double>(t) /
                        static_cast<double>(length) +
                    phase);
}

} // namespace

std::vector<std::vector<TimeSeries>> bundled_pseudo_activities(int n_activities, int length) {
    if (n_activities < 1) throw DomainError("bundled_pseudo_activities: need >= 1 activity");
    if (length < 2) throw DomainError("bundled_pseudo_activities: length must be >= 2");
    const auto L = static_cast<std::size_t>(length);

    std::vector<std::vector<TimeSeries>> out;
    for (int a = 0; a < n_activities; ++a) {
        std::vector<TimeSeries> variants;
        for (int v = 0; v < 2; ++v) {
            std::vector<double> x(L);
            for (std::size_t t = 0; t < L; ++t) {
                double s = 0.0;
                switch (a) {
                    case 0: // brisk stride, strong second harmonic
                        s = harmonic(8, t, L, v ? 0.35 : 0.0) +
                            (v ? 0.60 : 0.45) * harmonic(16, t, L, v ? 0.2 : 0.7);
                        break;
                    case 1: // quick steps, higher base rate
                        s = harmonic(16, t, L, v ? 0.3 : 0.0) +
                            (v ? 0.25 : 0.35) * harmonic(32, t, L, 1.1);
                        break;
                    case 2: // slow asymmetric cycle, three harmonics
                        s = harmonic(4, t, L, 0.0) +
                            0.5 * harmonic(8, t, L, v ? 0.5 : 0.9) +
                            (v ? 0.20 : 0.30) * harmonic(12, t, L, 0.4);
                        break;
                    case 3: // near-static hum: rectified slow wave + faint tremor
                        s = std::abs(harmonic(2, t, L, v ? 0.25 : 0.0)) +
                            (v ? 0.15 : 0.10) * harmonic(16, t, L, 0.0);
                        break;
                    default: { // generic signature for extra activities
                        double base = 5.0 + static_cast<double>(a);
                        s = harmonic(base, t, L, v ? 0.4 : 0.0) +
                            0.4 * harmonic(2.0 * base, t, L, 0.3 * static_cast<double>(a)) +
                            (v ? 0.2 : 0.1) * harmonic(3.0 * base, t, L, 0.9);
                        break;
                    }
                }
                x[t] = s;
            }
            variants.push_back(TimeSeries::from_scalars(std::move(x)));
        }
        out.push_back(std::move(variants));
    }
    return out;
}

std::vector<std::string> bundled_activity_names(int n_activities) {
    static const char* canonical[] = {"walking", "walking_upstairs", "walking_downstairs",
                                      "sitting"};
    std::vector<std::string> names;
    for (int a = 0; a < n_activities; ++a) {
        if (a < 4)
            names.emplace_back(canonical[a]);
        else
            names.push_back("activity" + std::to_string(a));
    }
    return names;
}

} // namespace dtwtc
