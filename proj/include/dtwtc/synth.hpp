#pragma once

#include "dtwtc/rand.hpp"
#include "dtwtc/time_series.hpp"

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace dtwtc {

struct SynthConfig {
    // Per activity: >= 1 source template (p = 1, length = output_length).
    // Training samples come from sources[a][0]; test samples from
    // sources[a][1] (a different "subject").
    std::vector<std::vector<TimeSeries>> sources;
    std::vector<std::string> activity_names;

    int train_per_activity = 200;
    int test_per_activity = 50;
    int fft_length = 256;
    int noise_length = 10;
    double noise_stddev = 2.23606797749978969; // sqrt(5): N(0,5) read as variance 5
    bool noise_complex = false;                 // also perturb imaginary parts
    int output_length = 128;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Per-sample generation record for the manifest and for spectrum checks.
struct SampleTrace {
    int window_offset = 0;
    int noise_offset = 0;
    std::vector<std::complex<double>> noise; // the draws added to the spectrum
    std::vector<double> prewindow;           // real series before windowing, fft_length long
};

/// One noisy sample from a template: normalize to zero mean/unit variance,
/// tile to fft_length, FFT, add the noise vector at a random contiguous bin
/// offset, IFFT (real part), return a random contiguous window. Draw order:
/// noise values, noise offset, window offset.
TimeSeries generate_sample(const TimeSeries& source, const SynthConfig& config, Rng& rng,
                           SampleTrace* trace = nullptr);

struct SynthManifestEntry {
    std::string split; // "train" | "test"
    int activity = 0;
    int index = 0; // within (split, activity)
    int window_offset = 0;
    int noise_offset = 0;
};

struct SynthResult {
    Dataset train;
    Dataset test;
    std::vector<SynthManifestEntry> manifest;
};

/// Full dataset generation. Every sample's RNG stream is derived from
/// (seed, split, global index), so the output is independent of generation
/// order.
SynthResult generate_dataset(const SynthConfig& config);

/// Deterministic stand-in sources when no real-data templates are available:
/// per activity, two harmonic-mixture variants with a distinct
/// frequency/amplitude signature (variant 1 mimics a second subject). Not
/// derived from any dataset.
std::vector<std::vector<TimeSeries>> bundled_pseudo_activities(int n_activities,
                                                               int length = 128);

/// Display names matching the bundled activities.
std::vector<std::string> bundled_activity_names(int n_activities);

} // namespace dtwtc
