#include "dtwtc/fft.hpp"

#include "dtwtc/error.hpp"

#include <cmath>

namespace dtwtc {

std::vector<std::complex<double>> fft(std::vector<std::complex<double>> signal, bool inverse) {
    const std::size_t n = signal.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw DomainError("fft: length must be a power of two, got " + std::to_string(n));
    if (n == 1) return signal;

    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(signal[i], signal[j]);
    }

    const double sign = inverse ? 1.0 : -1.0;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double angle = sign * 2.0 * M_PI / static_cast<double>(len);
        const std::complex<double> wlen(std::cos(angle), std::sin(angle));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                std::complex<double> u = signal[i + k];
                std::complex<double> v = signal[i + k + len / 2] * w;
                signal[i + k] = u + v;
                signal[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }

    if (inverse) {
        const double scale = 1.0 / static_cast<double>(n);
        for (auto& x : signal) x *= scale;
    }
    return signal;
}

} // namespace dtwtc
