#ifndef VIBCLUST_SPECTRAL_HPP
#define VIBCLUST_SPECTRAL_HPP

#include <bit>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include "vibclust/error.hpp"

namespace vibclust {

/// One-sided amplitude spectrum. magnitudes[k] is the amplitude at k * bin_resolution Hz.
struct MagnitudeSpectrum {
    std::vector<double> magnitudes;
    double bin_resolution = 0.0;
    std::size_t transform_length = 0;
};

inline std::size_t next_power_of_two(std::size_t n) { return std::bit_ceil(n); }

/// In-place iterative radix-2 decimation-in-time FFT. Size must be a power of two.
inline void fft_radix2(std::vector<std::complex<double>>& data) {
    const std::size_t n = data.size();
    require(std::has_single_bit(n), "FFT length must be a power of two");

    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) {
            j ^= bit;
        }
        j ^= bit;
        if (i < j) {
            std::swap(data[i], data[j]);
        }
    }

    // Twiddles come from the full-length table so every stage uses exactly rounded factors.
    std::vector<std::complex<double>> twiddle(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) {
        const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
        twiddle[k] = {std::cos(angle), std::sin(angle)};
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len / 2;
        const std::size_t step = n / len;
        for (std::size_t start = 0; start < n; start += len) {
            for (std::size_t k = 0; k < half; ++k) {
                const auto t = twiddle[k * step] * data[start + k + half];
                const auto u = data[start + k];
                data[start + k] = u + t;
                data[start + k + half] = u - t;
            }
        }
    }
}

/// Zero-pads to the next power of two N and scales |X_k| by 2/N (1/N at DC and Nyquist),
/// so a sinusoid of amplitude A on an exact bin peaks at A.
inline MagnitudeSpectrum fft_magnitude(std::span<const double> signal, double sample_rate) {
    require(signal.size() >= 2, "fft_magnitude needs at least two samples");
    require(sample_rate > 0.0, "sample_rate must be positive");
    const std::size_t n = next_power_of_two(signal.size());
    std::vector<std::complex<double>> buffer(n);
    for (std::size_t i = 0; i < signal.size(); ++i) {
        buffer[i] = signal[i];
    }
    fft_radix2(buffer);

    MagnitudeSpectrum out;
    out.transform_length = n;
    out.bin_resolution = sample_rate / static_cast<double>(n);
    out.magnitudes.resize(n / 2 + 1);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t k = 0; k <= n / 2; ++k) {
        const double scale = (k == 0 || k == n / 2) ? inv_n : 2.0 * inv_n;
        out.magnitudes[k] = std::abs(buffer[k]) * scale;
    }
    return out;
}

/// Sum of squared (zero-padded) time samples implied by a one-sided spectrum.
inline double spectrum_energy(const MagnitudeSpectrum& spectrum) {
    const auto& m = spectrum.magnitudes;
    const std::size_t last = m.size() - 1;
    double sum = m.front() * m.front() + m.back() * m.back();
    for (std::size_t k = 1; k < last; ++k) {
        sum += 0.5 * m[k] * m[k];
    }
    return sum * static_cast<double>(spectrum.transform_length);
}

}  // namespace vibclust

#endif  // VIBCLUST_SPECTRAL_HPP
