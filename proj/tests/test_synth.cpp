#include "dtwtc/dtw.hpp"
#include "dtwtc/error.hpp"
#include "dtwtc/fft.hpp"
#include "dtwtc/synth.hpp"

#include "test_helpers.hpp"

#include <doctest.h>

#include <cmath>

using namespace dtwtc;

namespace {

std::vector<std::complex<double>> random_complex(Rng& rng, std::size_t n) {
    std::vector<std::complex<double>> v(n);
    for (auto& x : v) x = {rng.uniform_real() * 2.0 - 1.0, rng.uniform_real() * 2.0 - 1.0};
    return v;
}

double max_abs_diff(const std::vector<std::complex<double>>& a,
                    const std::vector<std::complex<double>>& b) {
    double mx = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) mx = std::max(mx, std::abs(a[i] - b[i]));
    return mx;
}

SynthConfig small_config(std::uint64_t seed, double noise_stddev) {
    SynthConfig config;
    config.sources = bundled_pseudo_activities(3);
    config.activity_names = bundled_activity_names(3);
    config.train_per_activity = 4;
    config.test_per_activity = 2;
    config.noise_stddev = noise_stddev;
    config.seed = seed;
    return config;
}

} // namespace

TEST_CASE("fft") {
    SUBCASE("zeros transform to zeros, an impulse to all ones") {
        std::vector<std::complex<double>> zeros(16, 0.0);
        for (const auto& v : fft(zeros)) CHECK(std::abs(v) == 0.0);

        std::vector<std::complex<double>> impulse(16, 0.0);
        impulse[0] = 1.0;
        for (const auto& v : fft(impulse)) CHECK(testutil::approx_eq(std::abs(v - 1.0), 0.0, 1e-12));
    }

    SUBCASE("matches the naive DFT oracle") {
        Rng rng(61);
        for (std::size_t n : {2u, 8u, 16u, 64u}) {
            auto x = random_complex(rng, n);
            CHECK(max_abs_diff(fft(x), testutil::naive_dft(x)) < 1e-9);
            CHECK(max_abs_diff(ifft(x), testutil::naive_dft(x, true)) < 1e-9);
        }
    }

    SUBCASE("round-trip up to length 1024") {
        Rng rng(62);
        for (std::size_t n : {4u, 64u, 256u, 1024u}) {
            auto x = random_complex(rng, n);
            CHECK(max_abs_diff(ifft(fft(x)), x) < 1e-9);
        }
    }

    SUBCASE("Parseval") {
        Rng rng(63);
        auto x = random_complex(rng, 256);
        auto X = fft(x);
        double time_energy = 0.0, freq_energy = 0.0;
        for (const auto& v : x) time_energy += std::norm(v);
        for (const auto& v : X) freq_energy += std::norm(v);
        CHECK(std::abs(time_energy - freq_energy / 256.0) <= 1e-6 * time_energy);
    }

    SUBCASE("non-power-of-two lengths are rejected") {
        CHECK_THROWS_AS(fft(std::vector<std::complex<double>>(12, 0.0)), DomainError);
        CHECK_THROWS_AS(fft({}), DomainError);
    }
}

TEST_CASE("generate_sample") {
    SynthConfig config = small_config(5, 0.0);
    const TimeSeries& source = config.sources[0][0];

    SUBCASE("zero noise degenerates to a window of the tiled normalized template") {
        Rng rng(100);
        SampleTrace trace;
        TimeSeries sample = generate_sample(source, config, rng, &trace);
        REQUIRE(sample.length() == 128);

        // reconstruct the normalized tiled series directly
        double mean = 0.0, var = 0.0;
        for (std::size_t t = 0; t < 128; ++t) mean += source(t, 0);
        mean /= 128.0;
        for (std::size_t t = 0; t < 128; ++t) {
            double c = source(t, 0) - mean;
            var += c * c;
        }
        var /= 128.0;
        for (std::size_t t = 0; t < 128; ++t) {
            double want = (source((static_cast<std::size_t>(trace.window_offset) + t) % 128, 0) -
                           mean) /
                          std::sqrt(var);
            CHECK(testutil::approx_eq(sample(t, 0), want, 1e-9));
        }
    }

    SUBCASE("deterministic for a fixed rng stream") {
        Rng r1(42), r2(42);
        auto a = generate_sample(source, config, r1);
        auto b = generate_sample(source, config, r2);
        CHECK(a == b);
    }

    SUBCASE("noise perturbs exactly the configured bins of the spectrum") {
        SynthConfig noisy = small_config(5, 2.0);
        Rng rng(7);
        SampleTrace trace;
        TimeSeries sample = generate_sample(source, noisy, rng, &trace);
        REQUIRE(trace.noise.size() == 10);
        REQUIRE(trace.prewindow.size() == 256);

        // clean spectrum of the normalized tiled template
        double mean = 0.0, var = 0.0;
        for (std::size_t t = 0; t < 128; ++t) mean += source(t, 0);
        mean /= 128.0;
        for (std::size_t t = 0; t < 128; ++t) {
            double c = source(t, 0) - mean;
            var += c * c;
        }
        var /= 128.0;
        std::vector<std::complex<double>> clean(256);
        for (std::size_t i = 0; i < 256; ++i)
            clean[i] = (source(i % 128, 0) - mean) / std::sqrt(var);
        clean = fft(std::move(clean));

        // the perturbed spectrum differs from clean in exactly the 10 bins
        auto perturbed = clean;
        int nonzero = 0;
        for (std::size_t j = 0; j < 10; ++j) {
            perturbed[static_cast<std::size_t>(trace.noise_offset) + j] += trace.noise[j];
            if (std::abs(trace.noise[j]) > 0.0) ++nonzero;
        }
        CHECK(nonzero == 10);
        for (std::size_t i = 0; i < 256; ++i) {
            bool inside = i >= static_cast<std::size_t>(trace.noise_offset) &&
                          i < static_cast<std::size_t>(trace.noise_offset) + 10;
            CHECK((std::abs(perturbed[i] - clean[i]) > 0.0) == inside);
        }

        // and the recorded pre-window series is its inverse transform
        auto expected = ifft(std::move(perturbed));
        for (std::size_t i = 0; i < 256; ++i)
            CHECK(testutil::approx_eq(trace.prewindow[i], expected[i].real(), 1e-9));
        for (std::size_t t = 0; t < 128; ++t)
            CHECK(sample(t, 0) ==
                  trace.prewindow[static_cast<std::size_t>(trace.window_offset) + t]);
    }

    SUBCASE("wrong template length is rejected") {
        Rng rng(1);
        auto short_series = TimeSeries::from_scalars(std::vector<double>(64, 1.0));
        CHECK_THROWS_AS(generate_sample(short_series, config, rng), DomainError);
    }
}

TEST_CASE("generate_dataset") {
    SUBCASE("stock defaults: 800 train and 200 test samples") {
        SynthConfig config;
        config.sources = bundled_pseudo_activities(4);
        config.activity_names = bundled_activity_names(4);
        config.seed = 9;
        auto result = generate_dataset(config);
        CHECK(result.train.size() == 800);
        CHECK(result.test.size() == 200);
        CHECK(result.train.length() == 128);
        CHECK(result.train.dim() == 1);
        CHECK(result.train.label_set() == std::set<int>{0, 1, 2, 3});
        CHECK(result.train.label_name(0) == "walking");
        CHECK(result.train.label_name(3) == "sitting");
        CHECK(result.manifest.size() == 1000);
        for (const auto& s : result.train.samples())
            for (double v : s.series.values()) CHECK(std::isfinite(v));
    }

    SUBCASE("one sample per activity") {
        SynthConfig config = small_config(3, 1.0);
        config.train_per_activity = 1;
        config.test_per_activity = 1;
        auto result = generate_dataset(config);
        CHECK(result.train.size() == 3);
        CHECK(result.test.size() == 3);
    }

    SUBCASE("deterministic given the seed") {
        auto a = generate_dataset(small_config(11, 1.5));
        auto b = generate_dataset(small_config(11, 1.5));
        REQUIRE(a.train.size() == b.train.size());
        for (std::size_t i = 0; i < a.train.size(); ++i)
            CHECK(a.train[i].series == b.train[i].series);
    }

    SUBCASE("test split needs a second source per activity") {
        SynthConfig config = small_config(3, 1.0);
        for (auto& variants : config.sources)
            variants.erase(variants.begin() + 1, variants.end());
        CHECK_THROWS_AS(generate_dataset(config), DomainError);
        config.test_per_activity = 0;
        CHECK_NOTHROW(generate_dataset(config));
    }

    SUBCASE("config validation") {
        SynthConfig config = small_config(3, 1.0);
        config.fft_length = 200;
        CHECK_THROWS_AS(generate_dataset(config), DomainError);
        config.fft_length = 128; // < 2 * output
        CHECK_THROWS_AS(generate_dataset(config), DomainError);
        config = small_config(3, 1.0);
        config.noise_length = 300;
        CHECK_THROWS_AS(generate_dataset(config), DomainError);
    }

    SUBCASE("zero-noise samples with small window offsets match the clean window") {
        SynthConfig config = small_config(13, 0.0);
        config.train_per_activity = 12;
        config.test_per_activity = 0;
        auto result = generate_dataset(config);

        const int dw = 64;
        // clean zero-offset window per activity
        for (int a = 0; a < 3; ++a) {
            Rng rng(mix_seed(config.seed, 0,
                             static_cast<std::uint64_t>(a) * 12)); // first sample's stream
            SampleTrace trace;
            (void)generate_sample(config.sources[static_cast<std::size_t>(a)][0], config, rng,
                                  &trace);
            std::vector<double> zero_window(trace.prewindow.begin(),
                                            trace.prewindow.begin() + 128);
            auto clean0 = TimeSeries::from_scalars(std::move(zero_window));

            std::size_t asserted = 0;
            for (const auto& entry : result.manifest) {
                if (entry.split != "train" || entry.activity != a) continue;
                if (entry.window_offset + 1 > dw) continue; // bound not satisfied; skip
                const auto& sample =
                    result.train[static_cast<std::size_t>(a) * 12 +
                                 static_cast<std::size_t>(entry.index)];
                CHECK(testutil::approx_eq(
                    dtwsubseq_distance(sample.series, clean0, dw, 2), 0.0, 1e-9));
                ++asserted;
            }
            CHECK(asserted > 0); // offsets 0..64 cover about half the draws
        }
    }
}
