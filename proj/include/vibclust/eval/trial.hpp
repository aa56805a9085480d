#ifndef VIBCLUST_EVAL_TRIAL_HPP
#define VIBCLUST_EVAL_TRIAL_HPP

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "vibclust/cluster/elbow.hpp"
#include "vibclust/cluster/gmm.hpp"
#include "vibclust/cluster/kmeans.hpp"
#include "vibclust/cluster/optics.hpp"
#include "vibclust/dataio.hpp"
#include "vibclust/eval/purity.hpp"
#include "vibclust/features.hpp"
#include "vibclust/preprocess.hpp"
#include "vibclust/random.hpp"
#include "vibclust/reduce.hpp"

namespace vibclust {

/// One statistical feature in one domain, e.g. "TD:AbsMean".
struct FeatureRef {
    FeatureKind kind = FeatureKind::AbsMean;
    Domain domain = Domain::TimeDomain;

    std::string name() const {
        return std::string(to_string(domain)) + ":" + std::string(to_string(kind));
    }

    auto operator<=>(const FeatureRef&) const = default;
};

inline FeatureRef parse_feature_ref(std::string_view text) {
    const auto colon = text.find(':');
    require(colon != std::string_view::npos, "feature must look like TD:AbsMean");
    return {parse_feature_kind(text.substr(colon + 1)), parse_domain(text.substr(0, colon))};
}

inline std::string feature_set_name(const std::vector<FeatureRef>& features) {
    std::string out;
    for (std::size_t i = 0; i < features.size(); ++i) {
        out += (i ? "+" : "") + features[i].name();
    }
    return out;
}

/// "TD", "FD", or "mixed" when a combination spans both domains.
inline std::string domain_label(const std::vector<FeatureRef>& features) {
    if (features.empty()) {
        return "none";
    }
    const Domain first = features.front().domain;
    for (const auto& f : features) {
        if (f.domain != first) {
            return "mixed";
        }
    }
    return std::string(to_string(first));
}

/// Overclustering factors a scaled rule may use.
inline constexpr std::array<double, 5> kClusterFactors = {1.0, 1.25, 1.5, 1.75, 2.0};

inline bool is_cluster_factor(double f) {
    return std::find(kClusterFactors.begin(), kClusterFactors.end(), f) != kClusterFactors.end();
}

enum class ClusterRuleKind { Conditions, Scaled, ElbowMethod };

struct ClusterCountRule {
    ClusterRuleKind kind = ClusterRuleKind::Conditions;
    double factor = 1.0;

    static ClusterCountRule conditions() { return {ClusterRuleKind::Conditions, 1.0}; }
    static ClusterCountRule scaled(double f) { return {ClusterRuleKind::Scaled, f}; }
    static ClusterCountRule elbow() { return {ClusterRuleKind::ElbowMethod, 0.0}; }

    std::string name() const {
        switch (kind) {
            case ClusterRuleKind::Conditions: return "n";
            case ClusterRuleKind::ElbowMethod: return "elbow";
            case ClusterRuleKind::Scaled: {
                std::ostringstream s;
                s << factor << "n";
                return s.str();
            }
        }
        return "?";
    }

    bool operator==(const ClusterCountRule&) const = default;
};

inline ClusterCountRule parse_cluster_rule(std::string_view text) {
    if (text == "n") {
        return ClusterCountRule::conditions();
    }
    if (text == "elbow") {
        return ClusterCountRule::elbow();
    }
    require(text.size() > 1 && text.back() == 'n', "bad cluster rule '" + std::string(text) + "'");
    double f = 0.0;
    require(detail::parse_double(text.substr(0, text.size() - 1), f),
            "bad cluster rule '" + std::string(text) + "'");
    require(is_cluster_factor(f), "cluster factor must be one of 1, 1.25, 1.5, 1.75, 2");
    return ClusterCountRule::scaled(f);
}

/// Cluster count for a data set with `conditions` classes; fractional counts round half up.
inline std::size_t scaled_cluster_count(double factor, int conditions) {
    return static_cast<std::size_t>(std::floor(factor * conditions + 0.5));
}

/// One cell of a grid search.
struct TrialSpec {
    std::string experiment;
    std::string dataset_id;
    Algorithm algorithm = Algorithm::KMeans;
    std::vector<FeatureRef> features;
    std::optional<std::size_t> pca_components;
    ClusterCountRule cluster_rule;
    int run_index = 1;
    std::uint64_t seed = 0;

    std::string pca_label() const {
        return pca_components ? std::to_string(*pca_components) : std::string("none");
    }

    /// Every field except the seed, in a fixed textual form.
    std::string canonical_key() const {
        return experiment + "|" + dataset_id + "|" + std::string(to_string(algorithm)) + "|" +
               feature_set_name(features) + "|" + pca_label() + "|" + cluster_rule.name() + "|" +
               std::to_string(run_index);
    }

    bool operator==(const TrialSpec&) const = default;
};

inline std::uint64_t derive_seed(const TrialSpec& spec, std::string_view salt) {
    return fnv1a64(spec.canonical_key(), fnv1a64(salt));
}

struct TrialResult {
    TrialSpec spec;
    bool ok = false;
    std::string error;
    double purity = 0.0;
    std::size_t requested_clusters = 0;
    std::size_t effective_clusters = 0;
    double noise_fraction = 0.0;
    std::chrono::duration<double> wall_time{0.0};
};

/// Parameters shared by every trial of a run.
struct ExperimentOptions {
    SavGolParams savgol;
    OpticsParams optics;
    int kmeans_max_iter = 300;
    int gmm_max_iter = 200;
    double tol = 1e-6;
    double gmm_covariance_floor = 1e-6;
};

/// Raw data sets plus lazily built, cached preprocessed windows and single-feature matrices.
/// Safe to share between trial workers.
class DatasetCatalog {
public:
    explicit DatasetCatalog(SavGolParams savgol = {},
                            NormalizationScope scope = NormalizationScope::PerDataset)
        : savgol_(savgol), scope_(scope) {}

    DatasetCatalog(const DatasetCatalog&) = delete;
    DatasetCatalog& operator=(const DatasetCatalog&) = delete;

    void add(WindowedDataset dataset) {
        dataset.validate();
        require(!contains(dataset.name), "duplicate data set id '" + dataset.name + "'");
        order_.push_back(dataset.name);
        auto entry = std::make_unique<Entry>();
        entry->raw = std::move(dataset);
        entries_.emplace(order_.back(), std::move(entry));
    }

    bool contains(const std::string& id) const { return entries_.count(id) != 0; }
    const std::vector<std::string>& ids() const noexcept { return order_; }
    const SavGolParams& savgol() const noexcept { return savgol_; }
    NormalizationScope normalization() const noexcept { return scope_; }

    const WindowedDataset& raw(const std::string& id) const { return entry(id).raw; }

    const WindowedDataset& preprocessed(const std::string& id) const {
        auto& e = entry(id);
        std::lock_guard lock(e.mutex);
        return preprocessed_locked(e);
    }

    /// Standardized single-feature matrix (one column per channel).
    const FeatureMatrix& features(const std::string& id, const FeatureRef& ref) const {
        auto& e = entry(id);
        std::lock_guard lock(e.mutex);
        auto it = e.features.find(ref);
        if (it == e.features.end()) {
            const FeatureKind kinds[] = {ref.kind};
            it = e.features.emplace(ref, extract_features(preprocessed_locked(e), kinds, ref.domain))
                     .first;
        }
        return it->second;
    }

private:
    struct Entry {
        WindowedDataset raw;
        std::optional<WindowedDataset> preprocessed;
        std::map<FeatureRef, FeatureMatrix> features;
        std::mutex mutex;
    };

    Entry& entry(const std::string& id) const {
        const auto it = entries_.find(id);
        if (it == entries_.end()) {
            fail(ErrorCode::InvalidArgument, "unknown data set '" + id + "'");
        }
        return *it->second;
    }

    const WindowedDataset& preprocessed_locked(Entry& e) const {
        if (!e.preprocessed) {
            e.preprocessed = preprocess_pipeline(e.raw, savgol_, scope_);
        }
        return *e.preprocessed;
    }

    SavGolParams savgol_;
    NormalizationScope scope_;
    std::vector<std::string> order_;
    std::map<std::string, std::unique_ptr<Entry>> entries_;
};

/// Feature matrix a trial clusters: the requested features side by side, then optional PCA.
inline FeatureMatrix trial_features(const TrialSpec& spec, const DatasetCatalog& catalog) {
    require(!spec.features.empty(), "trial needs at least one feature");
    std::vector<FeatureMatrix> parts;
    for (const auto& ref : spec.features) {
        parts.push_back(catalog.features(spec.dataset_id, ref));
    }
    auto combined = combine_features(parts);
    if (spec.pca_components) {
        const auto model = pca_fit(combined, *spec.pca_components);
        combined = pca_transform(model, combined);
    }
    return combined;
}

/// preprocess -> features -> (combine) -> (PCA) -> cluster count -> fit -> purity.
/// Any failure is captured in the result instead of propagating.
inline TrialResult run_trial(const TrialSpec& spec, const DatasetCatalog& catalog,
                             const ExperimentOptions& options = {}) {
    const auto started = std::chrono::steady_clock::now();
    TrialResult result;
    result.spec = spec;
    try {
        const auto features = trial_features(spec, catalog);
        const Matrix& points = features.values;
        const int conditions = catalog.raw(spec.dataset_id).num_classes;

        std::size_t k = 0;
        switch (spec.cluster_rule.kind) {
            case ClusterRuleKind::Conditions:
                k = static_cast<std::size_t>(conditions);
                break;
            case ClusterRuleKind::Scaled:
                require(is_cluster_factor(spec.cluster_rule.factor),
                        "cluster factor must be one of 1, 1.25, 1.5, 1.75, 2");
                k = scaled_cluster_count(spec.cluster_rule.factor, conditions);
                break;
            case ClusterRuleKind::ElbowMethod: {
                const auto k_max = std::min<std::size_t>(2 * static_cast<std::size_t>(conditions) + 2,
                                                         points.rows());
                k = elbow_curve(points, k_max, spec.seed, options.kmeans_max_iter, options.tol).k;
                break;
            }
        }
        result.requested_clusters = k;

        ClusterAssignment assignment;
        switch (spec.algorithm) {
            case Algorithm::KMeans:
                assignment = kmeans_fit(points, KMeansParams{k, spec.seed, options.kmeans_max_iter,
                                                             options.tol})
                                 .assignment;
                break;
            case Algorithm::GMM:
                assignment = gmm_fit(points, GmmParams{k, spec.seed, options.gmm_max_iter, options.tol,
                                                       options.gmm_covariance_floor})
                                 .assignment;
                break;
            case Algorithm::OPTICS:
                assignment = optics_fit(points, options.optics).assignment;
                break;
        }
        result.purity = purity(assignment, features.labels);
        result.effective_clusters = assignment.occupied_clusters();
        result.noise_fraction =
            static_cast<double>(assignment.noise_count()) / static_cast<double>(assignment.size());
        result.ok = true;
    } catch (const std::exception& e) {
        result.ok = false;
        result.error = e.what();
    }
    result.wall_time = std::chrono::steady_clock::now() - started;
    return result;
}

}  // namespace vibclust

#endif  // VIBCLUST_EVAL_TRIAL_HPP
