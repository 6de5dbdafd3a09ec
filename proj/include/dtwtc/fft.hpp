#pragma once

#include <complex>
#include <vector>

namespace dtwtc {

/// Iterative radix-2 transform. Forward uses the e^{-2*pi*i*k*n/N}
/// convention; the inverse applies 1/N normalization, so fft(ifft(x)) == x to
/// round-off. Length must be a power of two.
std::vector<std::complex<double>> fft(std::vector<std::complex<double>> signal,
                                      bool inverse = false);

inline std::vector<std::complex<double>> ifft(std::vector<std::complex<double>> signal) {
    return fft(std::move(signal), true);
}

} // namespace dtwtc
