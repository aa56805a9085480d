#ifndef VIBCLUST_PREPROCESS_HPP
#define VIBCLUST_PREPROCESS_HPP

#include <algorithm>
#include <cmath>
#include <span>
#include <string_view>
#include <vector>

#include "vibclust/dataio.hpp"
#include "vibclust/error.hpp"
#include "vibclust/linalg.hpp"

namespace vibclust {

inline double mean_of(std::span<const double> x) {
    double sum = 0.0;
    for (const double v : x) {
        sum += v;
    }
    return sum / static_cast<double>(x.size());
}

/// Subtracts the sample mean.
inline std::vector<double> remove_dc(std::span<const double> signal) {
    require(!signal.empty(), "remove_dc needs a non-empty signal");
    const double m = mean_of(signal);
    std::vector<double> out(signal.begin(), signal.end());
    for (double& v : out) {
        v -= m;
    }
    // second pass absorbs the rounding left by the first
    const double residual = mean_of(out);
    for (double& v : out) {
        v -= residual;
    }
    return out;
}

/// z-score with the population standard deviation. A constant signal maps to zeros.
inline std::vector<double> normalize(std::span<const double> signal) {
    require(signal.size() >= 2, "normalize needs at least two samples");
    const double m = mean_of(signal);
    double ss = 0.0;
    double peak = 0.0;
    for (const double v : signal) {
        ss += (v - m) * (v - m);
        peak = std::max(peak, std::abs(v));
    }
    const double sd = std::sqrt(ss / static_cast<double>(signal.size()));
    std::vector<double> out(signal.size(), 0.0);
    if (sd <= 1e-13 * peak || sd == 0.0) {
        return out;
    }
    for (std::size_t i = 0; i < signal.size(); ++i) {
        out[i] = (signal[i] - m) / sd;
    }
    return out;
}

struct SavGolParams {
    std::size_t window_size = 9;
    std::size_t poly_order = 7;

    void validate() const {
        require(window_size % 2 == 1, "Savitzky-Golay window size must be odd");
        require(poly_order < window_size, "Savitzky-Golay order must be below the window size");
    }
};

/// Least-squares polynomial smoothing kernel that estimates the sample at `position`
/// (0-based within the window) from all window_size samples.
inline std::vector<double> savgol_kernel(const SavGolParams& params, std::size_t position) {
    params.validate();
    require(position < params.window_size, "kernel position outside the window");
    const std::size_t w = params.window_size;
    const std::size_t terms = params.poly_order + 1;
    const double half = static_cast<double>(w - 1) / 2.0;
    const double unit = half > 0.0 ? half : 1.0;

    // Offsets are scaled to [-1, 1] to keep the Vandermonde matrix well conditioned.
    Matrix vandermonde(w, terms);
    for (std::size_t j = 0; j < w; ++j) {
        const double u = (static_cast<double>(j) - half) / unit;
        double p = 1.0;
        for (std::size_t k = 0; k < terms; ++k) {
            vandermonde(j, k) = p;
            p *= u;
        }
    }
    std::vector<double> basis(terms);
    const double target = (static_cast<double>(position) - half) / unit;
    double p = 1.0;
    for (std::size_t k = 0; k < terms; ++k) {
        basis[k] = p;
        p *= target;
    }
    // kernel = V (V^T V)^{-1} e(t) = Q R^{-T} e(t)
    const HouseholderQr qr(std::move(vandermonde));
    return qr.apply_q(qr.solve_rt(basis));
}

/// Central smoothing coefficients (symmetric, unit sum).
inline std::vector<double> savgol_coefficients(const SavGolParams& params) {
    auto c = savgol_kernel(params, params.window_size / 2);
    const std::size_t w = c.size();
    for (std::size_t j = 0; j < w / 2; ++j) {
        const double avg = 0.5 * (c[j] + c[w - 1 - j]);
        c[j] = avg;
        c[w - 1 - j] = avg;
    }
    return c;
}

/// Interior samples are convolved with the central kernel; the first and last
/// window_size/2 samples are taken from the polynomial fitted to the first/last full window.
inline std::vector<double> savgol_filter(std::span<const double> signal, const SavGolParams& params) {
    params.validate();
    const std::size_t w = params.window_size;
    require(signal.size() >= w, "signal is shorter than the Savitzky-Golay window");
    const std::size_t n = signal.size();
    const std::size_t half = w / 2;
    std::vector<double> out(n, 0.0);

    const auto center = savgol_coefficients(params);
    for (std::size_t i = half; i + half < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < w; ++j) {
            acc += center[j] * signal[i - half + j];
        }
        out[i] = acc;
    }
    for (std::size_t pos = 0; pos < half; ++pos) {
        const auto head = savgol_kernel(params, pos);
        const auto tail = savgol_kernel(params, w - half + pos);
        double a = 0.0;
        double b = 0.0;
        for (std::size_t j = 0; j < w; ++j) {
            a += head[j] * signal[j];
            b += tail[j] * signal[n - w + j];
        }
        out[pos] = a;
        out[n - half + pos] = b;
    }
    return out;
}

/// Where the z-score statistics of the normalization stage come from.
enum class NormalizationScope {
    PerWindow,   // every window/channel trace scaled to unit std on its own
    PerDataset,  // one scale per channel, shared by all windows of the data set
};

inline std::string_view to_string(NormalizationScope scope) {
    return scope == NormalizationScope::PerWindow ? "per-window" : "per-dataset";
}

inline NormalizationScope parse_normalization_scope(std::string_view text) {
    if (text == "per-window") {
        return NormalizationScope::PerWindow;
    }
    require(text == "per-dataset", "normalization must be per-window or per-dataset");
    return NormalizationScope::PerDataset;
}

/// remove_dc -> normalize -> savgol_filter on every window and channel.
///
/// With PerDataset scope the DC-free traces of a channel are pooled and divided by their common
/// population std (the pooled mean is already zero), which keeps amplitude differences between
/// windows visible to the features. A channel with no variance anywhere becomes all zeros.
inline WindowedDataset preprocess_pipeline(const WindowedDataset& dataset, const SavGolParams& params,
                                           NormalizationScope scope = NormalizationScope::PerDataset) {
    params.validate();
    require(dataset.window_length >= params.window_size,
            "window length is shorter than the Savitzky-Golay window");
    WindowedDataset out = dataset;
    for (std::size_t w = 0; w < dataset.num_windows(); ++w) {
        for (std::size_t c = 0; c < dataset.num_channels; ++c) {
            const auto centered = remove_dc(dataset.window(w, c));
            if (scope == NormalizationScope::PerWindow) {
                const auto smoothed = savgol_filter(normalize(centered), params);
                std::copy(smoothed.begin(), smoothed.end(), out.window(w, c).begin());
            } else {
                std::copy(centered.begin(), centered.end(), out.window(w, c).begin());
            }
        }
    }
    if (scope == NormalizationScope::PerWindow) {
        return out;
    }

    const double count = static_cast<double>(dataset.num_windows() * dataset.window_length);
    for (std::size_t c = 0; c < dataset.num_channels; ++c) {
        double ss = 0.0;
        double peak = 0.0;
        for (std::size_t w = 0; w < dataset.num_windows(); ++w) {
            for (const double v : out.window(w, c)) {
                ss += v * v;
                peak = std::max(peak, std::abs(v));
            }
        }
        const double sd = std::sqrt(ss / count);
        const bool constant = sd == 0.0 || sd <= 1e-13 * peak;
        for (std::size_t w = 0; w < dataset.num_windows(); ++w) {
            auto trace = out.window(w, c);
            for (double& v : trace) {
                v = constant ? 0.0 : v / sd;
            }
            const auto smoothed = savgol_filter(trace, params);
            std::copy(smoothed.begin(), smoothed.end(), trace.begin());
        }
    }
    return out;
}

}  // namespace vibclust

#endif  // VIBCLUST_PREPROCESS_HPP
