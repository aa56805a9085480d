#ifndef VIBCLUST_DATAIO_HPP
#define VIBCLUST_DATAIO_HPP

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "vibclust/error.hpp"
#include "vibclust/random.hpp"

namespace vibclust {

/// Describes how to turn one CSV recording into a labeled window set.
struct DatasetManifest {
    std::string name;
    std::filesystem::path csv_path;
    std::vector<std::string> channel_columns;
    std::string label_column;
    double sample_rate = 1.0;
    std::size_t window_length = 512;
    std::size_t window_stride = 512;
    int num_classes = 2;
    double subset_fraction = 1.0;
    std::uint64_t shuffle_seed = 0;

    void validate() const {
        require(!name.empty(), "manifest name must be non-empty");
        require(!channel_columns.empty(), "manifest needs at least one channel column");
        require(!label_column.empty(), "manifest needs a label column");
        require(sample_rate > 0.0 && std::isfinite(sample_rate), "sample_rate must be positive");
        require(window_length >= 8, "window_length must be at least 8");
        require(window_stride >= 1, "window_stride must be at least 1");
        require(num_classes >= 2, "num_classes must be at least 2");
        require(subset_fraction > 0.0 && subset_fraction <= 1.0,
                "subset_fraction must lie in (0, 1]");
    }
};

inline void to_json(nlohmann::json& j, const DatasetManifest& m) {
    j = nlohmann::json{{"name", m.name},
                       {"csv_path", m.csv_path.generic_string()},
                       {"channel_columns", m.channel_columns},
                       {"label_column", m.label_column},
                       {"sample_rate", m.sample_rate},
                       {"window_length", m.window_length},
                       {"window_stride", m.window_stride},
                       {"num_classes", m.num_classes},
                       {"subset_fraction", m.subset_fraction},
                       {"shuffle_seed", m.shuffle_seed}};
}

/// Parses a manifest object. A relative csv_path is resolved against base_dir.
inline DatasetManifest manifest_from_json(const nlohmann::json& j,
                                          const std::filesystem::path& base_dir = {}) {
    static const char* known[] = {"name",        "csv_path",      "channel_columns",
                                  "label_column", "sample_rate",   "window_length",
                                  "window_stride", "num_classes",  "subset_fraction",
                                  "shuffle_seed"};
    require(j.is_object(), "manifest must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        require(std::find(std::begin(known), std::end(known), key) != std::end(known),
                "unknown manifest field '" + key + "'");
    }
    DatasetManifest m;
    try {
        m.name = j.at("name").get<std::string>();
        m.csv_path = j.at("csv_path").get<std::string>();
        m.channel_columns = j.at("channel_columns").get<std::vector<std::string>>();
        m.label_column = j.at("label_column").get<std::string>();
        m.sample_rate = j.at("sample_rate").get<double>();
        m.num_classes = j.at("num_classes").get<int>();
        m.window_length = j.value("window_length", m.window_length);
        m.window_stride = j.value("window_stride", m.window_stride);
        m.subset_fraction = j.value("subset_fraction", m.subset_fraction);
        m.shuffle_seed = j.value("shuffle_seed", m.shuffle_seed);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::InvalidArgument, std::string("bad manifest: ") + e.what());
    }
    if (m.csv_path.is_relative() && !base_dir.empty()) {
        m.csv_path = base_dir / m.csv_path;
    }
    m.validate();
    return m;
}

inline DatasetManifest read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        fail(ErrorCode::MissingFile, "cannot open manifest " + path.string());
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::InvalidArgument, "manifest " + path.string() + ": " + e.what());
    }
    return manifest_from_json(j, path.parent_path());
}

/// Fixed-length multi-channel windows with one class label each.
/// Samples are stored window-major, then channel, then time.
struct WindowedDataset {
    std::string name;
    std::size_t num_channels = 0;
    std::size_t window_length = 0;
    double sample_rate = 1.0;
    int num_classes = 0;
    std::vector<std::string> channel_names;
    std::vector<double> samples;
    std::vector<int> labels;

    std::size_t num_windows() const noexcept { return labels.size(); }

    std::span<const double> window(std::size_t w, std::size_t channel) const {
        return {samples.data() + (w * num_channels + channel) * window_length, window_length};
    }
    std::span<double> window(std::size_t w, std::size_t channel) {
        return {samples.data() + (w * num_channels + channel) * window_length, window_length};
    }

    // `block` holds num_channels consecutive channel traces.
    void push_window(std::span<const double> block, int label) {
        require(block.size() == num_channels * window_length, "window block has wrong size",
                ErrorCode::DimensionMismatch);
        samples.insert(samples.end(), block.begin(), block.end());
        labels.push_back(label);
    }

    std::vector<std::size_t> class_counts() const {
        std::vector<std::size_t> counts(static_cast<std::size_t>(std::max(num_classes, 0)), 0);
        for (const int label : labels) {
            ++counts[static_cast<std::size_t>(label)];
        }
        return counts;
    }

    void validate() const {
        require(num_channels > 0 && window_length > 0, "dataset has empty window shape");
        require(samples.size() == labels.size() * num_channels * window_length,
                "sample tensor does not match label count", ErrorCode::DimensionMismatch);
        require(!labels.empty(), "dataset " + name + " has no windows", ErrorCode::NoWindows);
        for (const int label : labels) {
            require(label >= 0 && label < num_classes, "label outside [0, num_classes)",
                    ErrorCode::LabelOutOfRange);
        }
    }
};

namespace detail {

inline std::string trim_cell(std::string_view cell) {
    while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) {
        cell.remove_prefix(1);
    }
    while (!cell.empty() &&
           (cell.back() == ' ' || cell.back() == '\t' || cell.back() == '\r')) {
        cell.remove_suffix(1);
    }
    if (cell.size() >= 2 && cell.front() == '"' && cell.back() == '"') {
        cell = cell.substr(1, cell.size() - 2);
    }
    return std::string(cell);
}

inline std::vector<std::string> split_csv_line(std::string_view line, char sep = ',') {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            cells.push_back(trim_cell(line.substr(start)));
            break;
        }
        cells.push_back(trim_cell(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return cells;
}

inline bool parse_double(std::string_view text, double& out) {
    if (!text.empty() && text.front() == '+') {
        text.remove_prefix(1);
    }
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, out);
    return ec == std::errc() && ptr == end && std::isfinite(out);
}

inline std::string format_double(double value) {
    char buffer[64];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, ptr);
}

}  // namespace detail

/// Reads the manifest's CSV, remaps labels to 0..num_classes-1, cuts windows on a fixed
/// grid (dropping any that straddle a label change) and applies the per-class subset.
///
/// Raw label values are sorted; the smallest num_classes distinct values are kept. A single
/// surplus class (the largest value) is discarded together with its rows, which is how a
/// mixed-anomaly class is excluded. More than one surplus class is an error.
inline WindowedDataset load_dataset(const DatasetManifest& manifest) {
    manifest.validate();
    std::ifstream in(manifest.csv_path);
    if (!in) {
        fail(ErrorCode::MissingFile, "cannot open " + manifest.csv_path.string());
    }

    std::string line;
    if (!std::getline(in, line)) {
        fail(ErrorCode::NoWindows, manifest.csv_path.string() + " is empty");
    }
    const auto header = detail::split_csv_line(line);
    auto column_index = [&](const std::string& column) {
        const auto it = std::find(header.begin(), header.end(), column);
        if (it == header.end()) {
            fail(ErrorCode::MissingColumn,
                 "column '" + column + "' not found in " + manifest.csv_path.string());
        }
        return static_cast<std::size_t>(it - header.begin());
    };
    std::vector<std::size_t> channel_idx;
    for (const auto& column : manifest.channel_columns) {
        channel_idx.push_back(column_index(column));
    }
    const std::size_t label_idx = column_index(manifest.label_column);

    const std::size_t num_channels = channel_idx.size();
    std::vector<std::vector<double>> traces(num_channels);
    std::vector<long long> raw_labels;
    std::size_t row_number = 1;
    while (std::getline(in, line)) {
        ++row_number;
        if (detail::trim_cell(line).empty()) {
            continue;
        }
        const auto cells = detail::split_csv_line(line);
        auto cell_value = [&](std::size_t idx, const std::string& column) {
            double v = 0.0;
            if (idx >= cells.size() || !detail::parse_double(cells[idx], v)) {
                fail(ErrorCode::NonNumericCell,
                     "row " + std::to_string(row_number) + ", column '" + column + "' of " +
                         manifest.csv_path.string() + " is not a finite number");
            }
            return v;
        };
        for (std::size_t c = 0; c < num_channels; ++c) {
            traces[c].push_back(cell_value(channel_idx[c], manifest.channel_columns[c]));
        }
        const double label = cell_value(label_idx, manifest.label_column);
        if (label != std::floor(label) || std::abs(label) > 1e15) {
            fail(ErrorCode::NonNumericCell, "row " + std::to_string(row_number) +
                                                ": label is not an integer");
        }
        raw_labels.push_back(static_cast<long long>(label));
    }

    std::vector<long long> distinct = raw_labels;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    const auto declared = static_cast<std::size_t>(manifest.num_classes);
    if (distinct.size() > declared + 1) {
        fail(ErrorCode::LabelOutOfRange,
             manifest.csv_path.string() + " has " + std::to_string(distinct.size()) +
                 " distinct labels but the manifest declares " +
                 std::to_string(manifest.num_classes));
    }
    std::map<long long, int> remap;
    for (std::size_t i = 0; i < distinct.size() && i < declared; ++i) {
        remap[distinct[i]] = static_cast<int>(i);
    }

    WindowedDataset all;
    all.name = manifest.name;
    all.num_channels = num_channels;
    all.window_length = manifest.window_length;
    all.sample_rate = manifest.sample_rate;
    all.num_classes = manifest.num_classes;
    all.channel_names = manifest.channel_columns;

    const std::size_t rows = raw_labels.size();
    const std::size_t length = manifest.window_length;
    std::vector<double> block(num_channels * length);
    for (std::size_t start = 0; start + length <= rows; start += manifest.window_stride) {
        const long long first = raw_labels[start];
        const auto found = remap.find(first);
        if (found == remap.end()) {
            continue;
        }
        const bool single_class = std::all_of(
            raw_labels.begin() + static_cast<std::ptrdiff_t>(start),
            raw_labels.begin() + static_cast<std::ptrdiff_t>(start + length),
            [first](long long l) { return l == first; });
        if (!single_class) {
            continue;
        }
        for (std::size_t c = 0; c < num_channels; ++c) {
            std::copy_n(traces[c].begin() + static_cast<std::ptrdiff_t>(start), length,
                        block.begin() + static_cast<std::ptrdiff_t>(c * length));
        }
        all.push_window(block, found->second);
    }
    if (all.num_windows() == 0) {
        fail(ErrorCode::NoWindows, "no complete single-class windows of length " +
                                       std::to_string(length) + " in " +
                                       manifest.csv_path.string());
    }
    if (manifest.subset_fraction >= 1.0) {
        return all;
    }

    // Shuffle, then keep round(fraction * count) windows of each class (at least one).
    std::vector<std::size_t> order(all.num_windows());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    Rng rng(manifest.shuffle_seed);
    rng.shuffle(order);
    const auto counts = all.class_counts();
    std::vector<std::size_t> quota(counts.size());
    for (std::size_t c = 0; c < counts.size(); ++c) {
        if (counts[c] > 0) {
            quota[c] = std::max<std::size_t>(
                1, static_cast<std::size_t>(
                       std::floor(manifest.subset_fraction * static_cast<double>(counts[c]) + 0.5)));
        }
    }
    WindowedDataset subset = all;
    subset.samples.clear();
    subset.labels.clear();
    std::vector<double> tmp(num_channels * length);
    for (const std::size_t w : order) {
        const auto label = static_cast<std::size_t>(all.labels[w]);
        if (quota[label] == 0) {
            continue;
        }
        --quota[label];
        for (std::size_t c = 0; c < num_channels; ++c) {
            const auto src = all.window(w, c);
            std::copy(src.begin(), src.end(), tmp.begin() + static_cast<std::ptrdiff_t>(c * length));
        }
        subset.push_window(tmp, all.labels[w]);
    }
    return subset;
}

/// Per-class signal profile of a synthetic data set.
struct ClassProfile {
    double amplitude_scale = 1.0;
    std::size_t dominant_frequency_bin = 1;
    double noise_std = 0.0;
};

struct SyntheticSpec {
    std::string name = "synthetic";
    int num_classes = 2;
    std::size_t windows_per_class = 10;
    std::size_t window_length = 512;
    std::size_t num_channels = 1;
    double sample_rate = 1.0;
    std::vector<ClassProfile> class_profiles;
    std::uint64_t seed = 0;

    void validate() const {
        require(num_classes >= 1, "synthetic spec needs at least one class");
        require(windows_per_class >= 1, "windows_per_class must be positive");
        require(window_length >= 2, "window_length must be at least 2");
        require(num_channels >= 1, "num_channels must be positive");
        require(sample_rate > 0.0, "sample_rate must be positive");
        require(class_profiles.size() == static_cast<std::size_t>(num_classes),
                "class_profiles length must equal num_classes");
        for (const auto& p : class_profiles) {
            require(p.amplitude_scale > 0.0, "amplitude_scale must be positive");
            require(p.noise_std >= 0.0, "noise_std must be non-negative");
            require(2 * p.dominant_frequency_bin < window_length,
                    "dominant_frequency_bin must be below window_length / 2");
        }
    }
};

inline void to_json(nlohmann::json& j, const ClassProfile& p) {
    j = nlohmann::json{{"amplitude_scale", p.amplitude_scale},
                       {"dominant_frequency_bin", p.dominant_frequency_bin},
                       {"noise_std", p.noise_std}};
}

inline void from_json(const nlohmann::json& j, ClassProfile& p) {
    p.amplitude_scale = j.at("amplitude_scale").get<double>();
    p.dominant_frequency_bin = j.at("dominant_frequency_bin").get<std::size_t>();
    p.noise_std = j.value("noise_std", 0.0);
}

inline void to_json(nlohmann::json& j, const SyntheticSpec& s) {
    j = nlohmann::json{{"name", s.name},
                       {"num_classes", s.num_classes},
                       {"windows_per_class", s.windows_per_class},
                       {"window_length", s.window_length},
                       {"num_channels", s.num_channels},
                       {"sample_rate", s.sample_rate},
                       {"class_profiles", s.class_profiles},
                       {"seed", s.seed}};
}

inline void from_json(const nlohmann::json& j, SyntheticSpec& s) {
    s.name = j.value("name", std::string("synthetic"));
    s.num_classes = j.at("num_classes").get<int>();
    s.windows_per_class = j.at("windows_per_class").get<std::size_t>();
    s.window_length = j.value("window_length", std::size_t{512});
    s.num_channels = j.value("num_channels", std::size_t{1});
    s.sample_rate = j.value("sample_rate", 1.0);
    s.class_profiles = j.at("class_profiles").get<std::vector<ClassProfile>>();
    s.seed = j.value("seed", std::uint64_t{0});
}

/// Class c windows are amplitude * sin(2*pi*bin*t/L) plus N(0, noise_std^2) per sample,
/// independently for every channel. Windows are emitted class by class.
inline WindowedDataset generate_synthetic(const SyntheticSpec& spec) {
    spec.validate();
    WindowedDataset out;
    out.name = spec.name;
    out.num_channels = spec.num_channels;
    out.window_length = spec.window_length;
    out.sample_rate = spec.sample_rate;
    out.num_classes = spec.num_classes;
    for (std::size_t c = 0; c < spec.num_channels; ++c) {
        out.channel_names.push_back("ch" + std::to_string(c));
    }

    Rng rng(spec.seed);
    const std::size_t length = spec.window_length;
    std::vector<double> block(spec.num_channels * length);
    for (int cls = 0; cls < spec.num_classes; ++cls) {
        const auto& profile = spec.class_profiles[static_cast<std::size_t>(cls)];
        const double omega = 2.0 * std::numbers::pi *
                             static_cast<double>(profile.dominant_frequency_bin) /
                             static_cast<double>(length);
        for (std::size_t w = 0; w < spec.windows_per_class; ++w) {
            for (std::size_t ch = 0; ch < spec.num_channels; ++ch) {
                for (std::size_t t = 0; t < length; ++t) {
                    double v = profile.amplitude_scale * std::sin(omega * static_cast<double>(t));
                    if (profile.noise_std > 0.0) {
                        v += profile.noise_std * rng.normal();
                    }
                    block[ch * length + t] = v;
                }
            }
            out.push_window(block, cls);
        }
    }
    return out;
}

/// Writes windows back-to-back as a CSV recording (header: channel names, then `label_column`).
/// Reloading with window_length == window_stride == dataset.window_length and
/// subset_fraction 1 reproduces the dataset exactly.
inline void write_dataset_csv(const WindowedDataset& dataset, const std::filesystem::path& path,
                              const std::string& label_column = "label") {
    std::ofstream out(path);
    if (!out) {
        fail(ErrorCode::Io, "cannot write " + path.string());
    }
    for (std::size_t c = 0; c < dataset.num_channels; ++c) {
        out << dataset.channel_names[c] << ',';
    }
    out << label_column << '\n';
    for (std::size_t w = 0; w < dataset.num_windows(); ++w) {
        for (std::size_t t = 0; t < dataset.window_length; ++t) {
            for (std::size_t c = 0; c < dataset.num_channels; ++c) {
                out << detail::format_double(dataset.window(w, c)[t]) << ',';
            }
            out << dataset.labels[w] << '\n';
        }
    }
    if (!out) {
        fail(ErrorCode::Io, "failed writing " + path.string());
    }
}

/// Manifest that reloads a CSV written by write_dataset_csv unchanged.
inline DatasetManifest matching_manifest(const WindowedDataset& dataset,
                                         const std::filesystem::path& csv_path,
                                         const std::string& label_column = "label") {
    DatasetManifest m;
    m.name = dataset.name;
    m.csv_path = csv_path;
    m.channel_columns = dataset.channel_names;
    m.label_column = label_column;
    m.sample_rate = dataset.sample_rate;
    m.window_length = dataset.window_length;
    m.window_stride = dataset.window_length;
    m.num_classes = dataset.num_classes;
    return m;
}

}  // namespace vibclust

#endif  // VIBCLUST_DATAIO_HPP
