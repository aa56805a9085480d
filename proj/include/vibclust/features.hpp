#ifndef VIBCLUST_FEATURES_HPP
#define VIBCLUST_FEATURES_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vibclust/dataio.hpp"
#include "vibclust/error.hpp"
#include "vibclust/matrix.hpp"
#include "vibclust/spectral.hpp"

namespace vibclust {

enum class FeatureKind { AbsMean, AbsMedian, Std, IQR, AbsSkew, AbsKurt };
enum class Domain { TimeDomain, FrequencyDomain };

inline constexpr std::array<FeatureKind, 6> kAllFeatureKinds = {
    FeatureKind::AbsMean, FeatureKind::AbsMedian, FeatureKind::Std,
    FeatureKind::IQR,     FeatureKind::AbsSkew,   FeatureKind::AbsKurt};
inline constexpr std::array<Domain, 2> kAllDomains = {Domain::TimeDomain, Domain::FrequencyDomain};

inline std::string_view to_string(FeatureKind kind) {
    switch (kind) {
        case FeatureKind::AbsMean: return "AbsMean";
        case FeatureKind::AbsMedian: return "AbsMedian";
        case FeatureKind::Std: return "Std";
        case FeatureKind::IQR: return "IQR";
        case FeatureKind::AbsSkew: return "AbsSkew";
        case FeatureKind::AbsKurt: return "AbsKurt";
    }
    return "?";
}

inline std::string_view to_string(Domain domain) {
    return domain == Domain::TimeDomain ? "TD" : "FD";
}

inline FeatureKind parse_feature_kind(std::string_view text) {
    for (const auto kind : kAllFeatureKinds) {
        if (to_string(kind) == text) {
            return kind;
        }
    }
    fail(ErrorCode::InvalidArgument, "unknown feature kind '" + std::string(text) + "'");
}

inline Domain parse_domain(std::string_view text) {
    if (text == "TD") {
        return Domain::TimeDomain;
    }
    if (text == "FD") {
        return Domain::FrequencyDomain;
    }
    fail(ErrorCode::InvalidArgument, "unknown domain '" + std::string(text) + "'");
}

// ---------------------------------------------------------------------------
// Scalar statistics

inline double abs_mean(std::span<const double> x) {
    require(!x.empty(), "abs_mean needs a non-empty input");
    double sum = 0.0;
    for (const double v : x) {
        sum += std::abs(v);
    }
    return sum / static_cast<double>(x.size());
}

inline double abs_median(std::span<const double> x) {
    require(!x.empty(), "abs_median needs a non-empty input");
    std::vector<double> a(x.size());
    std::transform(x.begin(), x.end(), a.begin(), [](double v) { return std::abs(v); });
    const std::size_t mid = a.size() / 2;
    std::nth_element(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(mid), a.end());
    const double upper = a[mid];
    if (a.size() % 2 == 1) {
        return upper;
    }
    const double lower = *std::max_element(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

/// Population standard deviation (divisor N).
inline double std_dev(std::span<const double> x) {
    require(x.size() >= 2, "std needs at least two samples");
    const double n = static_cast<double>(x.size());
    double mean = 0.0;
    for (const double v : x) {
        mean += v;
    }
    mean /= n;
    double ss = 0.0;
    for (const double v : x) {
        ss += (v - mean) * (v - mean);
    }
    return std::sqrt(ss / n);
}

/// Quantile of sorted data, linear interpolation at position (n-1)*q.
inline double quantile_sorted(std::span<const double> sorted, double q) {
    require(!sorted.empty(), "quantile of empty data");
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

inline double iqr(std::span<const double> x) {
    require(x.size() >= 2, "iqr needs at least two samples");
    std::vector<double> s(x.begin(), x.end());
    std::sort(s.begin(), s.end());
    return quantile_sorted(s, 0.75) - quantile_sorted(s, 0.25);
}

namespace detail {

struct AbsMoments {
    double m2 = 0.0;
    double m3 = 0.0;
    double m4 = 0.0;
    bool degenerate = false;
};

// Central moments of |x|. Variance below 1e-24 * mean^2 counts as zero.
inline AbsMoments abs_moments(std::span<const double> x) {
    const double n = static_cast<double>(x.size());
    double mean = 0.0;
    for (const double v : x) {
        mean += std::abs(v);
    }
    mean /= n;
    AbsMoments m;
    for (const double v : x) {
        const double d = std::abs(v) - mean;
        const double d2 = d * d;
        m.m2 += d2;
        m.m3 += d2 * d;
        m.m4 += d2 * d2;
    }
    m.m2 /= n;
    m.m3 /= n;
    m.m4 /= n;
    m.degenerate = m.m2 <= 1e-24 * mean * mean;
    return m;
}

}  // namespace detail

/// Moment skewness m3 / m2^1.5 of |x|. Zero-variance input yields 0 and sets *degenerate.
inline double abs_skew(std::span<const double> x, bool* degenerate = nullptr) {
    require(x.size() >= 3, "abs_skew needs at least three samples");
    const auto m = detail::abs_moments(x);
    if (degenerate != nullptr) {
        *degenerate = m.degenerate;
    }
    return m.degenerate ? 0.0 : m.m3 / std::pow(m.m2, 1.5);
}

/// Excess kurtosis m4 / m2^2 - 3 of |x|, same degenerate handling as abs_skew.
inline double abs_kurt(std::span<const double> x, bool* degenerate = nullptr) {
    require(x.size() >= 4, "abs_kurt needs at least four samples");
    const auto m = detail::abs_moments(x);
    if (degenerate != nullptr) {
        *degenerate = m.degenerate;
    }
    return m.degenerate ? 0.0 : m.m4 / (m.m2 * m.m2) - 3.0;
}

inline double compute_feature(FeatureKind kind, std::span<const double> x,
                              bool* degenerate = nullptr) {
    if (degenerate != nullptr) {
        *degenerate = false;
    }
    switch (kind) {
        case FeatureKind::AbsMean: return abs_mean(x);
        case FeatureKind::AbsMedian: return abs_median(x);
        case FeatureKind::Std: return std_dev(x);
        case FeatureKind::IQR: return iqr(x);
        case FeatureKind::AbsSkew: return abs_skew(x, degenerate);
        case FeatureKind::AbsKurt: return abs_kurt(x, degenerate);
    }
    return 0.0;
}

// ---------------------------------------------------------------------------
// Feature matrices

/// Where a feature column came from. Principal-component columns carry their index instead.
struct ColumnMeta {
    FeatureKind kind = FeatureKind::AbsMean;
    Domain domain = Domain::TimeDomain;
    std::size_t channel = 0;
    std::optional<std::size_t> principal_component;

    std::string name() const {
        if (principal_component) {
            return "PC" + std::to_string(*principal_component + 1);
        }
        return std::string(to_string(domain)) + ":" + std::string(to_string(kind)) + ":ch" +
               std::to_string(channel);
    }

    bool operator==(const ColumnMeta&) const = default;
};

struct FeatureMatrix {
    Matrix values;
    std::vector<ColumnMeta> columns;
    std::vector<int> labels;
    std::vector<std::size_t> degenerate_counts;  // per column: windows whose skew/kurt was undefined

    std::size_t num_windows() const noexcept { return values.rows(); }
    std::size_t num_columns() const noexcept { return values.cols(); }
};

/// Standardizes every column to zero mean and unit population std. Constant columns become zero.
inline void standardize_columns(Matrix& values) {
    const std::size_t rows = values.rows();
    if (rows == 0) {
        return;
    }
    for (std::size_t c = 0; c < values.cols(); ++c) {
        double mean = 0.0;
        double peak = 0.0;
        for (std::size_t r = 0; r < rows; ++r) {
            mean += values(r, c);
            peak = std::max(peak, std::abs(values(r, c)));
        }
        mean /= static_cast<double>(rows);
        double ss = 0.0;
        for (std::size_t r = 0; r < rows; ++r) {
            ss += (values(r, c) - mean) * (values(r, c) - mean);
        }
        const double sd = std::sqrt(ss / static_cast<double>(rows));
        const bool constant = sd == 0.0 || sd <= 1e-12 * peak;
        for (std::size_t r = 0; r < rows; ++r) {
            values(r, c) = constant ? 0.0 : (values(r, c) - mean) / sd;
        }
    }
}

/// Spectrum magnitudes without the DC bin; the sequence frequency-domain features are taken over.
inline std::vector<double> frequency_components(std::span<const double> signal, double sample_rate) {
    const auto spectrum = fft_magnitude(signal, sample_rate);
    return {spectrum.magnitudes.begin() + 1, spectrum.magnitudes.end()};
}

/// Raw (unstandardized) values, one column per kind x channel in kind-major order.
inline FeatureMatrix extract_raw_features(const WindowedDataset& dataset,
                                          std::span<const FeatureKind> kinds, Domain domain) {
    require(!kinds.empty(), "extract_features needs at least one feature kind");
    dataset.validate();
    const std::size_t windows = dataset.num_windows();
    const std::size_t channels = dataset.num_channels;

    FeatureMatrix out;
    out.values = Matrix(windows, kinds.size() * channels);
    out.labels = dataset.labels;
    out.degenerate_counts.assign(out.values.cols(), 0);
    for (const auto kind : kinds) {
        for (std::size_t c = 0; c < channels; ++c) {
            out.columns.push_back(ColumnMeta{kind, domain, c, std::nullopt});
        }
    }

    std::vector<double> spectrum;
    for (std::size_t w = 0; w < windows; ++w) {
        for (std::size_t c = 0; c < channels; ++c) {
            std::span<const double> source = dataset.window(w, c);
            if (domain == Domain::FrequencyDomain) {
                spectrum = frequency_components(source, dataset.sample_rate);
                source = spectrum;
            }
            for (std::size_t k = 0; k < kinds.size(); ++k) {
                bool degenerate = false;
                const std::size_t col = k * channels + c;
                const double v = compute_feature(kinds[k], source, &degenerate);
                out.values(w, col) = std::isfinite(v) ? v : 0.0;
                if (degenerate || !std::isfinite(v)) {
                    ++out.degenerate_counts[col];
                }
            }
        }
    }
    return out;
}

/// Feature columns for the requested kinds, standardized across windows.
inline FeatureMatrix extract_features(const WindowedDataset& dataset,
                                      std::span<const FeatureKind> kinds, Domain domain) {
    auto out = extract_raw_features(dataset, kinds, domain);
    standardize_columns(out.values);
    return out;
}

inline FeatureMatrix extract_features(const WindowedDataset& dataset,
                                      std::initializer_list<FeatureKind> kinds, Domain domain) {
    return extract_features(dataset, std::span<const FeatureKind>(kinds.begin(), kinds.size()),
                            domain);
}

/// Column concatenation; all inputs must describe the same windows.
inline FeatureMatrix combine_features(std::span<const FeatureMatrix> matrices) {
    require(!matrices.empty(), "combine_features needs at least one matrix");
    const auto& first = matrices.front();
    std::size_t total = 0;
    for (const auto& m : matrices) {
        require(m.num_windows() == first.num_windows(), "feature matrices differ in window count",
                ErrorCode::DimensionMismatch);
        require(m.labels == first.labels, "feature matrices carry different labels",
                ErrorCode::DimensionMismatch);
        total += m.num_columns();
    }
    FeatureMatrix out;
    out.values = Matrix(first.num_windows(), total);
    out.labels = first.labels;
    std::size_t offset = 0;
    for (const auto& m : matrices) {
        for (std::size_t r = 0; r < m.num_windows(); ++r) {
            for (std::size_t c = 0; c < m.num_columns(); ++c) {
                out.values(r, offset + c) = m.values(r, c);
            }
        }
        out.columns.insert(out.columns.end(), m.columns.begin(), m.columns.end());
        out.degenerate_counts.insert(out.degenerate_counts.end(), m.degenerate_counts.begin(),
                                     m.degenerate_counts.end());
        offset += m.num_columns();
    }
    return out;
}

inline FeatureMatrix combine_features(std::initializer_list<FeatureMatrix> matrices) {
    return combine_features(std::span<const FeatureMatrix>(matrices.begin(), matrices.size()));
}

/// CSV with a `label` column followed by one column per feature (header = ColumnMeta::name()).
inline void write_feature_csv(const FeatureMatrix& features, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        fail(ErrorCode::Io, "cannot write " + path.string());
    }
    out << "label";
    for (const auto& col : features.columns) {
        out << ',' << col.name();
    }
    out << '\n';
    for (std::size_t r = 0; r < features.num_windows(); ++r) {
        out << features.labels[r];
        for (std::size_t c = 0; c < features.num_columns(); ++c) {
            out << ',' << detail::format_double(features.values(r, c));
        }
        out << '\n';
    }
    if (!out) {
        fail(ErrorCode::Io, "failed writing " + path.string());
    }
}

}  // namespace vibclust

#endif  // VIBCLUST_FEATURES_HPP
