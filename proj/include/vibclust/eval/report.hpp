#ifndef VIBCLUST_EVAL_REPORT_HPP
#define VIBCLUST_EVAL_REPORT_HPP

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "vibclust/eval/grid.hpp"
#include "vibclust/eval/trial.hpp"

namespace vibclust {

/// Grouping key of the aggregate tables: everything in a TrialSpec except run index and seed.
struct GroupKey {
    std::string experiment;
    std::string algorithm;
    std::string feature_set;
    std::string domain;
    std::string dataset;
    std::string cluster_rule;
    std::string pca;

    auto tie() const {
        return std::tie(experiment, algorithm, feature_set, domain, dataset, cluster_rule, pca);
    }
    bool operator<(const GroupKey& o) const { return tie() < o.tie(); }
    bool operator==(const GroupKey& o) const { return tie() == o.tie(); }
};

inline GroupKey group_key(const TrialSpec& s) {
    return {s.experiment,        std::string(to_string(s.algorithm)), feature_set_name(s.features),
            domain_label(s.features), s.dataset_id,                   s.cluster_rule.name(),
            s.pca_label()};
}

/// Purity statistics of one group. Failed trials are counted but excluded from the moments.
struct GroupStats {
    std::size_t runs = 0;
    std::size_t failed = 0;
    double mean = 0.0;
    double std = 0.0;  // population
    double min = 0.0;
    double max = 0.0;
    double mean_clusters = 0.0;
    double mean_noise_fraction = 0.0;
};

struct GridReport {
    std::vector<TrialResult> ledger;
    std::vector<std::pair<GroupKey, GroupStats>> groups;  // sorted by key
};

inline GroupStats summarize(const std::vector<const TrialResult*>& members) {
    GroupStats s;
    std::vector<double> values;
    double clusters = 0.0;
    double noise = 0.0;
    for (const auto* r : members) {
        if (!r->ok) {
            ++s.failed;
            continue;
        }
        values.push_back(r->purity);
        clusters += static_cast<double>(r->effective_clusters);
        noise += r->noise_fraction;
    }
    s.runs = values.size();
    if (values.empty()) {
        s.mean = s.std = s.min = s.max = std::nan("");
        return s;
    }
    const double n = static_cast<double>(values.size());
    for (const double v : values) {
        s.mean += v;
    }
    s.mean /= n;
    double ss = 0.0;
    for (const double v : values) {
        ss += (v - s.mean) * (v - s.mean);
    }
    s.std = std::sqrt(ss / n);
    s.min = *std::min_element(values.begin(), values.end());
    s.max = *std::max_element(values.begin(), values.end());
    s.mean_clusters = clusters / n;
    s.mean_noise_fraction = noise / n;
    return s;
}

inline GridReport aggregate_report(std::vector<TrialResult> results) {
    require(!results.empty(), "aggregate_report needs at least one result");
    GridReport report;
    report.ledger = std::move(results);
    std::map<GroupKey, std::vector<const TrialResult*>> grouped;
    for (const auto& r : report.ledger) {
        grouped[group_key(r.spec)].push_back(&r);
    }
    for (const auto& [key, members] : grouped) {
        report.groups.emplace_back(key, summarize(members));
    }
    return report;
}

/// Mean purity per (algorithm, feature set) over every data set and run of one experiment,
/// best first. This is the "average purity per feature per algorithm" view.
struct RankingRow {
    std::string algorithm;
    std::string feature_set;
    double mean = 0.0;
    std::size_t runs = 0;
};

inline std::vector<RankingRow> feature_ranking(const GridReport& report, const std::string& experiment) {
    std::map<std::pair<std::string, std::string>, std::pair<double, std::size_t>> sums;
    for (const auto& r : report.ledger) {
        if (!r.ok || r.spec.experiment != experiment) {
            continue;
        }
        auto& s = sums[{std::string(to_string(r.spec.algorithm)), feature_set_name(r.spec.features)}];
        s.first += r.purity;
        s.second += 1;
    }
    std::vector<RankingRow> rows;
    for (const auto& [key, s] : sums) {
        rows.push_back({key.first, key.second, s.first / static_cast<double>(s.second), s.second});
    }
    std::stable_sort(rows.begin(), rows.end(), [](const RankingRow& a, const RankingRow& b) {
        if (a.algorithm != b.algorithm) {
            return a.algorithm < b.algorithm;
        }
        if (a.mean != b.mean) {
            return a.mean > b.mean;
        }
        return a.feature_set < b.feature_set;
    });
    return rows;
}

/// Mean purity of successful trials matching a predicate.
template <typename Pred>
double mean_purity(const std::vector<TrialResult>& results, Pred pred) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& r : results) {
        if (r.ok && pred(r)) {
            sum += r.purity;
            ++n;
        }
    }
    return n == 0 ? std::nan("") : sum / static_cast<double>(n);
}

// ---------------------------------------------------------------------------
// JSON

inline void to_json(nlohmann::json& j, const TrialSpec& s) {
    std::vector<std::string> features;
    for (const auto& f : s.features) {
        features.push_back(f.name());
    }
    j = nlohmann::json{{"experiment", s.experiment},
                       {"dataset", s.dataset_id},
                       {"algorithm", std::string(to_string(s.algorithm))},
                       {"features", features},
                       {"domain", domain_label(s.features)},
                       {"pca_components", s.pca_components ? nlohmann::json(*s.pca_components)
                                                           : nlohmann::json(nullptr)},
                       {"cluster_rule", s.cluster_rule.name()},
                       {"run_index", s.run_index},
                       {"seed", s.seed}};
}

inline void from_json(const nlohmann::json& j, TrialSpec& s) {
    s.experiment = j.at("experiment").get<std::string>();
    s.dataset_id = j.at("dataset").get<std::string>();
    s.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
    s.features.clear();
    for (const auto& f : j.at("features")) {
        s.features.push_back(parse_feature_ref(f.get<std::string>()));
    }
    const auto& pcs = j.at("pca_components");
    s.pca_components = pcs.is_null() ? std::nullopt : std::optional<std::size_t>(pcs.get<std::size_t>());
    s.cluster_rule = parse_cluster_rule(j.at("cluster_rule").get<std::string>());
    s.run_index = j.at("run_index").get<int>();
    s.seed = j.at("seed").get<std::uint64_t>();
}

/// Wall time is left out so that reports of identical runs are byte-identical.
inline void to_json(nlohmann::json& j, const TrialResult& r) {
    j = nlohmann::json{{"spec", r.spec}, {"ok", r.ok}};
    if (r.ok) {
        j["purity"] = r.purity;
        j["requested_clusters"] = r.requested_clusters;
        j["effective_clusters"] = r.effective_clusters;
        j["noise_fraction"] = r.noise_fraction;
    } else {
        j["error"] = r.error;
    }
}

inline void from_json(const nlohmann::json& j, TrialResult& r) {
    r.spec = j.at("spec").get<TrialSpec>();
    r.ok = j.at("ok").get<bool>();
    if (r.ok) {
        r.purity = j.at("purity").get<double>();
        r.requested_clusters = j.at("requested_clusters").get<std::size_t>();
        r.effective_clusters = j.at("effective_clusters").get<std::size_t>();
        r.noise_fraction = j.at("noise_fraction").get<double>();
    } else {
        r.error = j.value("error", std::string());
    }
}

inline nlohmann::json number_or_null(double v) {
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

inline nlohmann::json groups_to_json(const GridReport& report) {
    auto out = nlohmann::json::array();
    for (const auto& [k, s] : report.groups) {
        out.push_back({{"experiment", k.experiment},
                       {"algorithm", k.algorithm},
                       {"feature_set", k.feature_set},
                       {"domain", k.domain},
                       {"dataset", k.dataset},
                       {"cluster_rule", k.cluster_rule},
                       {"pca_components", k.pca},
                       {"runs", s.runs},
                       {"failed", s.failed},
                       {"mean_purity", number_or_null(s.mean)},
                       {"std_purity", number_or_null(s.std)},
                       {"min_purity", number_or_null(s.min)},
                       {"max_purity", number_or_null(s.max)},
                       {"mean_effective_clusters", s.mean_clusters},
                       {"mean_noise_fraction", s.mean_noise_fraction}});
    }
    return out;
}

// ---------------------------------------------------------------------------
// CSV

namespace detail {

inline std::string csv_number(double v) {
    return std::isfinite(v) ? format_double(v) : std::string();
}

}  // namespace detail

/// One row per aggregate group, ready for plotting.
inline void write_aggregate_csv(const GridReport& report, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        fail(ErrorCode::Io, "cannot write " + path.string());
    }
    out << "experiment,algorithm,feature_set,domain,dataset,cluster_rule,pca_components,runs,failed,"
           "mean_purity,std_purity,min_purity,max_purity,mean_effective_clusters,"
           "mean_noise_fraction\n";
    for (const auto& [k, s] : report.groups) {
        out << k.experiment << ',' << k.algorithm << ',' << k.feature_set << ',' << k.domain << ','
            << k.dataset << ',' << k.cluster_rule << ',' << k.pca << ',' << s.runs << ',' << s.failed
            << ',' << detail::csv_number(s.mean) << ',' << detail::csv_number(s.std) << ','
            << detail::csv_number(s.min) << ',' << detail::csv_number(s.max) << ','
            << detail::csv_number(s.mean_clusters) << ','
            << detail::csv_number(s.mean_noise_fraction) << '\n';
    }
}

/// Generalization view of Q1: per (algorithm, feature) the mean purity on every data set, the
/// feature's rank within each data set, and the spread across data sets.
inline void write_generalization_csv(const GridReport& q1, const std::filesystem::path& path) {
    std::vector<std::string> datasets;
    std::map<std::pair<std::string, std::string>, std::map<std::string, double>> table;
    for (const auto& [k, s] : q1.groups) {
        if (k.experiment != "Q1") {
            continue;
        }
        if (std::find(datasets.begin(), datasets.end(), k.dataset) == datasets.end()) {
            datasets.push_back(k.dataset);
        }
        table[{k.algorithm, k.feature_set}][k.dataset] = s.mean;
    }
    std::sort(datasets.begin(), datasets.end());

    // rank of each feature within (algorithm, dataset), 1 = best
    std::map<std::tuple<std::string, std::string, std::string>, std::size_t> rank;
    for (const auto& ds : datasets) {
        std::map<std::string, std::vector<std::pair<double, std::string>>> per_algo;
        for (const auto& [key, row] : table) {
            const auto it = row.find(ds);
            if (it != row.end() && std::isfinite(it->second)) {
                per_algo[key.first].push_back({-it->second, key.second});
            }
        }
        for (auto& [algo, list] : per_algo) {
            std::sort(list.begin(), list.end());
            for (std::size_t i = 0; i < list.size(); ++i) {
                rank[{algo, list[i].second, ds}] = i + 1;
            }
        }
    }

    std::ofstream out(path);
    if (!out) {
        fail(ErrorCode::Io, "cannot write " + path.string());
    }
    out << "algorithm,feature";
    for (const auto& ds : datasets) {
        out << ",purity_" << ds;
    }
    for (const auto& ds : datasets) {
        out << ",rank_" << ds;
    }
    out << ",mean_across_datasets,std_across_datasets\n";
    for (const auto& [key, row] : table) {
        out << key.first << ',' << key.second;
        std::vector<double> values;
        for (const auto& ds : datasets) {
            const auto it = row.find(ds);
            const double v = it == row.end() ? std::nan("") : it->second;
            out << ',' << detail::csv_number(v);
            if (std::isfinite(v)) {
                values.push_back(v);
            }
        }
        for (const auto& ds : datasets) {
            const auto it = rank.find({key.first, key.second, ds});
            out << ',';
            if (it != rank.end()) {
                out << it->second;
            }
        }
        double mean = std::nan("");
        double sd = std::nan("");
        if (!values.empty()) {
            mean = 0.0;
            for (const double v : values) {
                mean += v;
            }
            mean /= static_cast<double>(values.size());
            double ss = 0.0;
            for (const double v : values) {
                ss += (v - mean) * (v - mean);
            }
            sd = std::sqrt(ss / static_cast<double>(values.size()));
        }
        out << ',' << detail::csv_number(mean) << ',' << detail::csv_number(sd) << '\n';
    }
}

/// Wall-clock time per trial, kept apart from the deterministic report.
inline void write_timings_csv(const std::vector<TrialResult>& results, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        fail(ErrorCode::Io, "cannot write " + path.string());
    }
    out << "experiment,dataset,algorithm,feature_set,cluster_rule,pca_components,run_index,ok,seconds\n";
    for (const auto& r : results) {
        const auto& s = r.spec;
        out << s.experiment << ',' << s.dataset_id << ',' << to_string(s.algorithm) << ','
            << feature_set_name(s.features) << ',' << s.cluster_rule.name() << ',' << s.pca_label()
            << ',' << s.run_index << ',' << (r.ok ? 1 : 0) << ',' << r.wall_time.count() << '\n';
    }
}

/// Mean purity of one experiment's successful trials as a text table. Rows and columns are
/// labelled by the given functions of the TrialSpec, in order of first appearance in the ledger.
template <typename RowLabel, typename ColumnLabel>
void print_pivot(std::ostream& os, const std::vector<TrialResult>& ledger, const std::string& experiment,
                 const std::string& title, RowLabel row_label, ColumnLabel column_label) {
    std::vector<std::string> columns;
    std::vector<std::string> rows;
    std::map<std::pair<std::string, std::string>, std::pair<double, std::size_t>> cell;
    for (const auto& r : ledger) {
        if (r.spec.experiment != experiment) {
            continue;
        }
        const std::string col = column_label(r.spec);
        const std::string row = row_label(r.spec);
        if (std::find(columns.begin(), columns.end(), col) == columns.end()) {
            columns.push_back(col);
        }
        if (std::find(rows.begin(), rows.end(), row) == rows.end()) {
            rows.push_back(row);
        }
        if (r.ok) {
            auto& c = cell[{row, col}];
            c.first += r.purity;
            c.second += 1;
        }
    }
    std::size_t width = 12;
    for (const auto& row : rows) {
        width = std::max(width, row.size() + 2);
    }
    std::size_t col_width = 10;
    for (const auto& col : columns) {
        col_width = std::max(col_width, col.size() + 2);
    }
    const auto flags = os.flags();
    const auto precision = os.precision();
    os << title << '\n' << std::string(width, ' ');
    for (const auto& col : columns) {
        os << std::setw(static_cast<int>(col_width)) << col;
    }
    os << '\n';
    for (const auto& row : rows) {
        os << row << std::string(width - row.size(), ' ');
        for (const auto& col : columns) {
            const auto it = cell.find({row, col});
            os << std::setw(static_cast<int>(col_width));
            if (it == cell.end()) {
                os << "-";
            } else {
                os << std::fixed << std::setprecision(4)
                   << it->second.first / static_cast<double>(it->second.second);
            }
        }
        os << '\n';
    }
    os.flags(flags);
    os.precision(precision);
}

/// Algorithms as columns.
template <typename RowLabel>
void print_mean_table(std::ostream& os, const std::vector<TrialResult>& ledger,
                      const std::string& experiment, const std::string& title, RowLabel row_label) {
    print_pivot(os, ledger, experiment, title, row_label,
                [](const TrialSpec& s) { return std::string(to_string(s.algorithm)); });
}

}  // namespace vibclust

#endif  // VIBCLUST_EVAL_REPORT_HPP
