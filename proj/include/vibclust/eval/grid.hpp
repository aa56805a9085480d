#ifndef VIBCLUST_EVAL_GRID_HPP
#define VIBCLUST_EVAL_GRID_HPP

#include <algorithm>
#include <array>
#include <atomic>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "vibclust/eval/trial.hpp"

namespace vibclust {

enum class Experiment { Q1, Q2, Q3, Q4, Q5 };

inline constexpr std::array<Experiment, 5> kAllExperiments = {Experiment::Q1, Experiment::Q2,
                                                              Experiment::Q3, Experiment::Q4,
                                                              Experiment::Q5};

inline std::string_view to_string(Experiment e) {
    switch (e) {
        case Experiment::Q1: return "Q1";
        case Experiment::Q2: return "Q2";
        case Experiment::Q3: return "Q3";
        case Experiment::Q4: return "Q4";
        case Experiment::Q5: return "Q5";
    }
    return "?";
}

inline Experiment parse_experiment(std::string_view text) {
    for (const auto e : kAllExperiments) {
        const auto name = to_string(e);
        if (text.size() == 2 && (text[0] == 'q' || text[0] == 'Q') && text[1] == name[1]) {
            return e;
        }
    }
    fail(ErrorCode::InvalidArgument, "unknown experiment '" + std::string(text) + "'");
}

inline constexpr std::array<std::size_t, 4> kPcaComponents = {6, 4, 2, 1};

struct GridConfig {
    std::vector<std::string> datasets;
    int runs_per_setting = 3;
    std::string seed_salt;
};

/// Best features per algorithm, ranked on Q1 results.
using TopFeatures = std::map<Algorithm, std::vector<FeatureRef>>;

/// Ranks every (algorithm, feature) pair of successful Q1 trials by mean purity across data
/// sets and runs (ties: alphabetical feature name) and keeps the first `count` per algorithm.
inline TopFeatures top_features(const std::vector<TrialResult>& q1_results, std::size_t count = 3) {
    std::map<std::pair<Algorithm, FeatureRef>, std::pair<double, std::size_t>> sums;
    for (const auto& r : q1_results) {
        if (!r.ok || r.spec.experiment != "Q1" || r.spec.features.size() != 1) {
            continue;
        }
        auto& s = sums[{r.spec.algorithm, r.spec.features.front()}];
        s.first += r.purity;
        s.second += 1;
    }
    std::map<Algorithm, std::vector<std::pair<double, FeatureRef>>> ranked;
    for (const auto& [key, s] : sums) {
        ranked[key.first].push_back({s.first / static_cast<double>(s.second), key.second});
    }
    TopFeatures out;
    for (auto& [algorithm, list] : ranked) {
        std::sort(list.begin(), list.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) {
                return a.first > b.first;
            }
            return a.second.name() < b.second.name();
        });
        auto& top = out[algorithm];
        for (std::size_t i = 0; i < list.size() && i < count; ++i) {
            top.push_back(list[i].second);
        }
    }
    return out;
}

namespace detail {

inline void add_runs(std::vector<TrialSpec>& out, TrialSpec base, const GridConfig& config) {
    for (int run = 1; run <= config.runs_per_setting; ++run) {
        base.run_index = run;
        base.seed = derive_seed(base, config.seed_salt);
        out.push_back(base);
    }
}

inline const std::vector<FeatureRef>& require_top(const TopFeatures* top, Algorithm a) {
    if (top == nullptr || top->count(a) == 0 || top->at(a).size() < 3) {
        fail(ErrorCode::MissingPrerequisite,
             "experiment needs the top-3 features of " + std::string(to_string(a)) +
                 " from a Q1 report");
    }
    return top->at(a);
}

}  // namespace detail

/// Trial list of one experiment, in deterministic order (data set, algorithm, setting, run).
/// Q2 reuses the Q1 trials and expands to nothing. Q3-Q5 need `top` (from a Q1 report) and run
/// K-means and GMM only.
inline std::vector<TrialSpec> expand_grid(Experiment experiment, const GridConfig& config,
                                          const TopFeatures* top = nullptr) {
    require(config.runs_per_setting >= 1, "runs_per_setting must be positive");
    require(!config.datasets.empty(), "grid needs at least one data set");
    const std::string name(to_string(experiment));
    std::vector<TrialSpec> out;
    const Algorithm later_algorithms[] = {Algorithm::KMeans, Algorithm::GMM};

    switch (experiment) {
        case Experiment::Q1:
            for (const auto& ds : config.datasets) {
                for (const auto a : {Algorithm::KMeans, Algorithm::OPTICS, Algorithm::GMM}) {
                    for (const auto domain : kAllDomains) {
                        for (const auto kind : kAllFeatureKinds) {
                            TrialSpec s;
                            s.experiment = name;
                            s.dataset_id = ds;
                            s.algorithm = a;
                            s.features = {FeatureRef{kind, domain}};
                            detail::add_runs(out, s, config);
                        }
                    }
                }
            }
            break;
        case Experiment::Q2:
            break;
        case Experiment::Q3:
            for (const auto& ds : config.datasets) {
                for (const auto a : later_algorithms) {
                    const auto& f = detail::require_top(top, a);
                    const std::vector<std::vector<FeatureRef>> combos = {
                        {f[0]}, {f[1]}, {f[2]}, {f[0], f[1]}, {f[1], f[2]}, {f[2], f[0]},
                        {f[0], f[1], f[2]}};
                    for (const auto& combo : combos) {
                        TrialSpec s;
                        s.experiment = name;
                        s.dataset_id = ds;
                        s.algorithm = a;
                        s.features = combo;
                        detail::add_runs(out, s, config);
                    }
                }
            }
            break;
        case Experiment::Q4:
            for (const auto& ds : config.datasets) {
                for (const auto a : later_algorithms) {
                    const auto& f = detail::require_top(top, a);
                    std::vector<std::optional<std::size_t>> settings = {std::nullopt};
                    settings.insert(settings.end(), kPcaComponents.begin(), kPcaComponents.end());
                    for (const auto& pcs : settings) {
                        TrialSpec s;
                        s.experiment = name;
                        s.dataset_id = ds;
                        s.algorithm = a;
                        s.features = {f[0], f[1], f[2]};
                        s.pca_components = pcs;
                        detail::add_runs(out, s, config);
                    }
                }
            }
            break;
        case Experiment::Q5:
            for (const auto& ds : config.datasets) {
                for (const auto a : later_algorithms) {
                    const auto& f = detail::require_top(top, a);
                    std::vector<ClusterCountRule> rules = {ClusterCountRule::elbow(),
                                                           ClusterCountRule::conditions()};
                    for (std::size_t i = 1; i < kClusterFactors.size(); ++i) {
                        rules.push_back(ClusterCountRule::scaled(kClusterFactors[i]));
                    }
                    for (const auto& rule : rules) {
                        TrialSpec s;
                        s.experiment = name;
                        s.dataset_id = ds;
                        s.algorithm = a;
                        s.features = {f[0], f[1], f[2]};
                        s.cluster_rule = rule;
                        detail::add_runs(out, s, config);
                    }
                }
            }
            break;
    }
    return out;
}

/// Runs trials on up to `jobs` threads. Results come back in spec order regardless of scheduling.
inline std::vector<TrialResult> run_trials(const std::vector<TrialSpec>& specs,
                                           const DatasetCatalog& catalog,
                                           const ExperimentOptions& options, unsigned jobs = 1) {
    std::vector<TrialResult> results(specs.size());
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(specs.size())));
    if (jobs <= 1) {
        for (std::size_t i = 0; i < specs.size(); ++i) {
            results[i] = run_trial(specs[i], catalog, options);
        }
        return results;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> workers;
    for (unsigned w = 0; w < jobs; ++w) {
        workers.emplace_back([&] {
            for (std::size_t i = next++; i < specs.size(); i = next++) {
                results[i] = run_trial(specs[i], catalog, options);
            }
        });
    }
    workers.clear();
    return results;
}

}  // namespace vibclust

#endif  // VIBCLUST_EVAL_GRID_HPP
