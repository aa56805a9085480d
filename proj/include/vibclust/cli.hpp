#ifndef VIBCLUST_CLI_HPP
#define VIBCLUST_CLI_HPP

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vibclust/dataio.hpp"
#include "vibclust/error.hpp"
#include "vibclust/eval/grid.hpp"
#include "vibclust/eval/report.hpp"
#include "vibclust/eval/trial.hpp"
#include "vibclust/features.hpp"
#include "vibclust/preprocess.hpp"
#include "vibclust/suite.hpp"

#ifndef VIBCLUST_VERSION
#define VIBCLUST_VERSION "0.0.0"
#endif

namespace vibclust::cli {

namespace fs = std::filesystem;
using nlohmann::json;

/// A data set given either as a CSV manifest or as a synthetic generator spec.
using DatasetSource = std::variant<DatasetManifest, SyntheticSpec>;

inline const std::string& source_name(const DatasetSource& s) {
    return std::visit([](const auto& v) -> const std::string& { return v.name; }, s);
}

struct RunConfig {
    std::vector<DatasetSource> datasets;
    std::string which = "all";
    int runs_per_setting = 3;
    unsigned jobs = 1;
    fs::path out_dir = "vibclust-out";
    std::string seed_salt;
    SavGolParams savgol;
    NormalizationScope normalization = NormalizationScope::PerDataset;
    OpticsParams optics;
    int kmeans_max_iter = 300;
    int gmm_max_iter = 200;
    double tol = 1e-6;
    double gmm_covariance_floor = 1e-6;
    int verbosity = 0;

    void validate() const {
        require(!datasets.empty(), "at least one data set must be configured");
        require(runs_per_setting >= 1, "--runs must be positive");
        require(jobs >= 1, "--jobs must be positive");
        require(optics.min_samples >= 1, "OPTICS min_samples must be positive");
        require(optics.eps_percentile > 0.0 && optics.eps_percentile <= 1.0,
                "OPTICS eps percentile must lie in (0, 1]");
        require(kmeans_max_iter >= 1 && gmm_max_iter >= 1, "iteration limits must be positive");
        savgol.validate();
        std::set<std::string> names;
        for (const auto& d : datasets) {
            require(names.insert(source_name(d)).second,
                    "duplicate data set name '" + source_name(d) + "'");
        }
    }

    ExperimentOptions options() const {
        ExperimentOptions o;
        o.savgol = savgol;
        o.optics = optics;
        o.kmeans_max_iter = kmeans_max_iter;
        o.gmm_max_iter = gmm_max_iter;
        o.tol = tol;
        o.gmm_covariance_floor = gmm_covariance_floor;
        return o;
    }

    GridConfig grid() const {
        GridConfig g;
        for (const auto& d : datasets) {
            g.datasets.push_back(source_name(d));
        }
        g.runs_per_setting = runs_per_setting;
        g.seed_salt = seed_salt;
        return g;
    }
};

inline RunConfig default_config() {
    RunConfig c;
    for (auto& spec : default_synthetic_suite()) {
        c.datasets.emplace_back(std::move(spec));
    }
    return c;
}

namespace detail {

inline json read_json_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        fail(ErrorCode::MissingFile, "cannot open " + path.string());
    }
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        fail(ErrorCode::InvalidArgument, path.string() + ": " + e.what());
    }
}

inline void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        fail(ErrorCode::Io, "cannot write " + path.string());
    }
    out << text;
    if (!out) {
        fail(ErrorCode::Io, "failed writing " + path.string());
    }
}

inline DatasetSource parse_source(const json& entry, const fs::path& base_dir) {
    require(entry.is_object() && entry.size() == 1,
            "each data set entry needs exactly one of 'manifest' or 'synthetic'");
    if (entry.contains("manifest")) {
        const auto& m = entry.at("manifest");
        if (m.is_string()) {
            const fs::path p = m.get<std::string>();
            return read_manifest(p.is_relative() ? base_dir / p : p);
        }
        return manifest_from_json(m, base_dir);
    }
    require(entry.contains("synthetic"), "each data set entry needs 'manifest' or 'synthetic'");
    const auto& s = entry.at("synthetic");
    if (s.is_string()) {
        const auto key = s.get<std::string>();
        if (key == "pump") {
            return pump_bench_spec();
        }
        if (key == "unbalance") {
            return unbalance_rig_spec();
        }
        if (key == "circulation") {
            return circulation_pump_spec();
        }
        fail(ErrorCode::InvalidArgument, "unknown built-in synthetic data set '" + key + "'");
    }
    try {
        auto spec = s.get<SyntheticSpec>();
        spec.validate();
        return spec;
    } catch (const json::exception& e) {
        fail(ErrorCode::InvalidArgument, std::string("bad synthetic spec: ") + e.what());
    }
}

}  // namespace detail

/// Applies a JSON config object on top of `config`. Unknown keys are rejected.
inline void apply_config_json(RunConfig& config, const json& j, const fs::path& base_dir) {
    static const std::set<std::string> known = {
        "datasets",      "which",          "runs",         "jobs",
        "out",           "seed_salt",      "savgol_window", "savgol_order",
        "normalization", "optics_min_samples", "optics_max_eps", "optics_eps_percentile",
        "kmeans_max_iter", "gmm_max_iter", "tol",          "gmm_covariance_floor",
        "verbosity"};
    require(j.is_object(), "config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        require(known.count(key) != 0, "unknown config field '" + key + "'");
    }
    try {
        if (j.contains("datasets")) {
            config.datasets.clear();
            for (const auto& entry : j.at("datasets")) {
                config.datasets.push_back(detail::parse_source(entry, base_dir));
            }
        }
        config.which = j.value("which", config.which);
        config.runs_per_setting = j.value("runs", config.runs_per_setting);
        config.jobs = j.value("jobs", config.jobs);
        if (j.contains("out")) {
            const fs::path out = j.at("out").get<std::string>();
            config.out_dir = out.is_relative() ? base_dir / out : out;
        }
        config.seed_salt = j.value("seed_salt", config.seed_salt);
        config.savgol.window_size = j.value("savgol_window", config.savgol.window_size);
        config.savgol.poly_order = j.value("savgol_order", config.savgol.poly_order);
        if (j.contains("normalization")) {
            config.normalization = parse_normalization_scope(j.at("normalization").get<std::string>());
        }
        config.optics.min_samples = j.value("optics_min_samples", config.optics.min_samples);
        if (j.contains("optics_max_eps") && !j.at("optics_max_eps").is_null()) {
            config.optics.max_eps = j.at("optics_max_eps").get<double>();
        }
        config.optics.eps_percentile = j.value("optics_eps_percentile", config.optics.eps_percentile);
        config.kmeans_max_iter = j.value("kmeans_max_iter", config.kmeans_max_iter);
        config.gmm_max_iter = j.value("gmm_max_iter", config.gmm_max_iter);
        config.tol = j.value("tol", config.tol);
        config.gmm_covariance_floor = j.value("gmm_covariance_floor", config.gmm_covariance_floor);
        config.verbosity = j.value("verbosity", config.verbosity);
    } catch (const json::exception& e) {
        fail(ErrorCode::InvalidArgument, std::string("bad config: ") + e.what());
    }
}

inline RunConfig load_config(const fs::path& path) {
    RunConfig config = default_config();
    apply_config_json(config, detail::read_json_file(path), path.parent_path());
    return config;
}

/// Everything that determines results. Output location, worker count and verbosity are left
/// out because they do not change any number.
inline json config_snapshot(const RunConfig& c) {
    auto datasets = json::array();
    for (const auto& d : c.datasets) {
        if (const auto* m = std::get_if<DatasetManifest>(&d)) {
            datasets.push_back({{"manifest", *m}});
        } else {
            datasets.push_back({{"synthetic", std::get<SyntheticSpec>(d)}});
        }
    }
    return {{"datasets", datasets},
            {"runs", c.runs_per_setting},
            {"seed_salt", c.seed_salt},
            {"savgol_window", c.savgol.window_size},
            {"savgol_order", c.savgol.poly_order},
            {"normalization", std::string(to_string(c.normalization))},
            {"optics_min_samples", c.optics.min_samples},
            {"optics_max_eps", number_or_null(c.optics.max_eps)},
            {"optics_eps_percentile", c.optics.eps_percentile},
            {"kmeans_max_iter", c.kmeans_max_iter},
            {"gmm_max_iter", c.gmm_max_iter},
            {"tol", c.tol},
            {"gmm_covariance_floor", c.gmm_covariance_floor}};
}

inline json provenance(const RunConfig& c) {
    return {{"version", VIBCLUST_VERSION},
            {"config", config_snapshot(c)},
            {"pinned_defaults",
             {{"savgol", {{"window", 9}, {"order", 7}}},
              {"runs_per_setting", 3},
              {"cluster_factors", kClusterFactors},
              {"pca_components", kPcaComponents},
              {"optics_min_samples", 5},
              {"optics_eps_percentile", 0.9},
              {"kmeans", {{"init", "k-means++"}, {"max_iter", 300}, {"tol", 1e-6}}},
              {"gmm", {{"covariance", "diagonal"}, {"max_iter", 200}, {"tol", 1e-6}, {"floor", 1e-6}}},
              {"elbow_k_max", "2n+2"},
              {"top_features_per_algorithm", 3}}},
            {"notes",
             {"Q2 has no trials of its own; it re-reads the Q1 ledger per data set.",
              "Q3-Q5 run K-means and GMM only, on the three best Q1 features of each algorithm.",
              "Q3 crosses 3 data sets x 2 algorithms x 7 feature combinations x 3 runs = 126 trials; "
              "Q5 crosses 3 x 2 x 6 cluster rules x 3 = 108 trials."}}};
}

inline std::vector<Experiment> selected_experiments(const std::string& which) {
    if (which == "all") {
        return {kAllExperiments.begin(), kAllExperiments.end()};
    }
    return {parse_experiment(which)};
}

inline void load_catalog(const RunConfig& config, DatasetCatalog& catalog) {
    for (const auto& d : config.datasets) {
        if (const auto* m = std::get_if<DatasetManifest>(&d)) {
            catalog.add(load_dataset(*m));
        } else {
            catalog.add(generate_synthetic(std::get<SyntheticSpec>(d)));
        }
    }
}

// ---------------------------------------------------------------------------
// Text tables

inline void print_experiment_tables(std::ostream& os, Experiment e, const std::vector<TrialResult>& ledger) {
    const std::string name(to_string(e));
    auto features = [](const TrialSpec& s) { return feature_set_name(s.features); };
    switch (e) {
        case Experiment::Q1:
            print_mean_table(os, ledger, name, "Q1 mean purity per feature", features);
            break;
        case Experiment::Q2:
            for (const auto a : {Algorithm::KMeans, Algorithm::OPTICS, Algorithm::GMM}) {
                std::vector<TrialResult> subset;
                std::copy_if(ledger.begin(), ledger.end(), std::back_inserter(subset),
                             [&](const TrialResult& r) { return r.spec.algorithm == a; });
                print_pivot(os, subset, "Q1",
                            "Q2 mean purity per data set (" + std::string(to_string(a)) + ")", features,
                            [](const TrialSpec& s) { return s.dataset_id; });
            }
            break;
        case Experiment::Q3:
            print_mean_table(os, ledger, name, "Q3 mean purity per feature combination", features);
            break;
        case Experiment::Q4:
            print_mean_table(os, ledger, name, "Q4 mean purity per number of principal components",
                             [](const TrialSpec& s) { return "pcs=" + s.pca_label(); });
            break;
        case Experiment::Q5:
            print_mean_table(os, ledger, name, "Q5 mean purity per cluster count rule",
                             [](const TrialSpec& s) { return s.cluster_rule.name(); });
            break;
    }
    os << '\n';
}

inline json top_features_json(const TopFeatures& top) {
    json out = json::object();
    for (const auto& [algorithm, refs] : top) {
        std::vector<std::string> names;
        for (const auto& r : refs) {
            names.push_back(r.name());
        }
        out[std::string(to_string(algorithm))] = names;
    }
    return out;
}

inline std::vector<TrialResult> ledger_from_json(const json& section) {
    return section.at("ledger").get<std::vector<TrialResult>>();
}

// ---------------------------------------------------------------------------
// Subcommands

/// Writes every configured data set's features (all kinds, both domains, raw values) and prints
/// per-class means averaged over channels.
inline int cmd_features(const RunConfig& config, std::ostream& out) {
    config.validate();
    DatasetCatalog catalog(config.savgol, config.normalization);
    load_catalog(config, catalog);
    fs::create_directories(config.out_dir);
    for (const auto& id : catalog.ids()) {
        const auto& ds = catalog.preprocessed(id);
        for (const auto domain : kAllDomains) {
            const auto fm = extract_raw_features(ds, kAllFeatureKinds, domain);
            const auto path =
                config.out_dir / ("features_" + id + "_" + std::string(to_string(domain)) + ".csv");
            write_feature_csv(fm, path);

            out << id << ' ' << to_string(domain) << " per-class means (averaged over channels)\n";
            out << std::left << std::setw(8) << "class";
            for (const auto kind : kAllFeatureKinds) {
                out << std::right << std::setw(12) << to_string(kind);
            }
            out << '\n';
            const std::size_t channels = ds.num_channels;
            for (int cls = 0; cls < ds.num_classes; ++cls) {
                out << std::left << std::setw(8) << cls << std::right;
                for (std::size_t k = 0; k < kAllFeatureKinds.size(); ++k) {
                    double sum = 0.0;
                    std::size_t n = 0;
                    for (std::size_t w = 0; w < fm.num_windows(); ++w) {
                        if (fm.labels[w] != cls) {
                            continue;
                        }
                        for (std::size_t c = 0; c < channels; ++c) {
                            sum += fm.values(w, k * channels + c);
                            ++n;
                        }
                    }
                    out << std::setw(12) << std::setprecision(4)
                        << (n ? sum / static_cast<double>(n) : 0.0);
                }
                out << '\n';
            }
            std::size_t degenerate = 0;
            for (const auto d : fm.degenerate_counts) {
                degenerate += d;
            }
            if (degenerate != 0) {
                out << "  " << degenerate << " degenerate skew/kurtosis values set to 0\n";
            }
            out << '\n';
        }
    }
    return 0;
}

/// Runs the selected experiments, merging into an existing report.json in the output directory.
/// Returns 0 when every trial succeeded and 1 otherwise.
inline int cmd_experiment(const RunConfig& config, std::ostream& out) {
    config.validate();
    const auto experiments = selected_experiments(config.which);
    DatasetCatalog catalog(config.savgol, config.normalization);
    load_catalog(config, catalog);
    fs::create_directories(config.out_dir);

    const fs::path report_path = config.out_dir / "report.json";
    json report = json::object();
    if (config.which != "all" && fs::exists(report_path)) {
        report = detail::read_json_file(report_path);
        if (report.contains("provenance") && report["provenance"].value("config", json()) !=
                                                   config_snapshot(config)) {
            // an older report from a different configuration cannot feed this run
            report = json::object();
        }
    }
    if (!report.contains("experiments")) {
        report["experiments"] = json::object();
    }

    const auto grid = config.grid();
    const auto options = config.options();
    std::optional<std::vector<TrialResult>> q1;
    auto require_q1 = [&]() -> const std::vector<TrialResult>& {
        if (!q1) {
            const auto& ex = report["experiments"];
            if (!ex.contains("Q1")) {
                fail(ErrorCode::MissingPrerequisite,
                     "no Q1 results in " + report_path.string() + "; run 'experiment --which q1' first");
            }
            q1 = ledger_from_json(ex.at("Q1"));
        }
        return *q1;
    };

    std::size_t total = 0;
    std::size_t failed = 0;
    std::vector<TrialResult> timings;
    for (const auto e : experiments) {
        const std::string name(to_string(e));
        json section = json::object();
        if (e == Experiment::Q2) {
            const auto aggregated = aggregate_report(require_q1());
            write_generalization_csv(aggregated, config.out_dir / "aggregate_Q2.csv");
            section["derived_from"] = "Q1";
            section["groups"] = groups_to_json(aggregated);
            report["experiments"][name] = section;
            print_experiment_tables(out, e, aggregated.ledger);
            continue;
        }

        std::optional<TopFeatures> top;
        if (e != Experiment::Q1) {
            top = top_features(require_q1());
        }
        const auto specs = expand_grid(e, grid, top ? &*top : nullptr);
        if (config.verbosity > 0) {
            out << name << ": " << specs.size() << " trials\n";
        }
        auto results = run_trials(specs, catalog, options, config.jobs);
        for (const auto& r : results) {
            ++total;
            if (!r.ok) {
                ++failed;
                out << "trial failed: " << r.spec.canonical_key() << ": " << r.error << '\n';
            } else if (config.verbosity > 1) {
                out << r.spec.canonical_key() << " purity=" << r.purity << '\n';
            }
        }
        timings.insert(timings.end(), results.begin(), results.end());
        if (e == Experiment::Q1) {
            q1 = results;
        }
        const auto aggregated = aggregate_report(std::move(results));
        write_aggregate_csv(aggregated, config.out_dir / ("aggregate_" + name + ".csv"));
        section["ledger"] = aggregated.ledger;
        section["groups"] = groups_to_json(aggregated);
        if (top) {
            section["top_features"] = top_features_json(*top);
        }
        report["experiments"][name] = section;
        print_experiment_tables(out, e, aggregated.ledger);
    }

    report["provenance"] = provenance(config);
    detail::write_text_file(report_path, report.dump(2) + "\n");
    write_timings_csv(timings, config.out_dir / "timings.csv");
    out << total - failed << '/' << total << " trials succeeded; report written to "
        << report_path.string() << '\n';
    return failed == 0 ? 0 : 1;
}

/// Re-aggregates an existing report.json and reprints its tables.
inline int cmd_report(const RunConfig& config, std::ostream& out) {
    const fs::path report_path = config.out_dir / "report.json";
    const auto report = detail::read_json_file(report_path);
    require(report.contains("experiments"), report_path.string() + " has no experiments");
    const auto& ex = report.at("experiments");
    const auto experiments = selected_experiments(config.which);
    for (const auto e : experiments) {
        const std::string name(to_string(e));
        if (e == Experiment::Q2) {
            if (ex.contains("Q1")) {
                const auto aggregated = aggregate_report(ledger_from_json(ex.at("Q1")));
                write_generalization_csv(aggregated, config.out_dir / "aggregate_Q2.csv");
                print_experiment_tables(out, e, aggregated.ledger);
            }
            continue;
        }
        if (!ex.contains(name)) {
            if (config.which != "all") {
                fail(ErrorCode::MissingPrerequisite, "no " + name + " results in " + report_path.string());
            }
            continue;
        }
        const auto aggregated = aggregate_report(ledger_from_json(ex.at(name)));
        write_aggregate_csv(aggregated, config.out_dir / ("aggregate_" + name + ".csv"));
        print_experiment_tables(out, e, aggregated.ledger);
        for (const auto& row : feature_ranking(aggregated, name)) {
            out << "  " << row.algorithm << "  " << row.feature_set << "  " << row.mean << '\n';
        }
        out << '\n';
    }
    return 0;
}

/// Writes each synthetic data set as CSV plus a manifest that reloads it.
inline int cmd_synth(const RunConfig& config, std::ostream& out) {
    config.validate();
    fs::create_directories(config.out_dir);
    for (const auto& d : config.datasets) {
        const auto* spec = std::get_if<SyntheticSpec>(&d);
        if (spec == nullptr) {
            continue;
        }
        const auto ds = generate_synthetic(*spec);
        const std::string csv_name = ds.name + ".csv";
        write_dataset_csv(ds, config.out_dir / csv_name);
        const json manifest = matching_manifest(ds, csv_name);
        detail::write_text_file(config.out_dir / (ds.name + ".manifest.json"), manifest.dump(2) + "\n");
        out << "wrote " << (config.out_dir / csv_name).string() << " (" << ds.num_windows()
            << " windows, " << ds.num_classes << " classes)\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------
// Entry point

/// Exit codes: 0 success, 1 some trials failed, 2 usage, configuration or ingestion error.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
    CLI::App app{"Vibration clustering benchmark"};
    app.set_version_flag("--version", std::string(VIBCLUST_VERSION));
    app.require_subcommand(1);

    std::string config_path;
    std::string which;
    int runs = 0;
    unsigned jobs = 0;
    std::string out_dir;
    std::string seed_salt;
    std::size_t savgol_window = 0;
    std::size_t savgol_order = 0;
    std::string normalization;
    std::size_t optics_min_samples = 0;
    double optics_max_eps = 0.0;
    double optics_eps_percentile = 0.0;
    int verbose = 0;

    std::vector<CLI::Option*> options;
    auto add_common = [&](CLI::App* sub) {
        options.push_back(sub->add_option("--config", config_path, "JSON run configuration")
                              ->check(CLI::ExistingFile));
        options.push_back(sub->add_option("--out", out_dir, "output directory"));
        options.push_back(sub->add_option("--savgol-window", savgol_window, "Savitzky-Golay window"));
        options.push_back(sub->add_option("--savgol-order", savgol_order, "Savitzky-Golay order"));
        options.push_back(sub->add_option("--normalization", normalization,
                                          "per-dataset (default) or per-window")
                              ->check(CLI::IsMember({"per-dataset", "per-window"})));
        sub->add_flag("-v,--verbose", verbose, "more output (repeatable)");
    };
    auto add_grid = [&](CLI::App* sub) {
        options.push_back(sub->add_option("--which", which, "q1|q2|q3|q4|q5|all")
                              ->check(CLI::IsMember({"q1", "q2", "q3", "q4", "q5", "all", "Q1", "Q2",
                                                     "Q3", "Q4", "Q5"})));
        options.push_back(sub->add_option("--runs", runs, "runs per setting")->check(CLI::PositiveNumber));
        options.push_back(sub->add_option("--jobs", jobs, "parallel trials")->check(CLI::PositiveNumber));
        options.push_back(sub->add_option("--seed-salt", seed_salt, "salt mixed into every trial seed"));
        options.push_back(sub->add_option("--optics-min-samples", optics_min_samples,
                                          "OPTICS min_samples")
                              ->check(CLI::PositiveNumber));
        options.push_back(sub->add_option("--optics-max-eps", optics_max_eps, "OPTICS max_eps"));
        options.push_back(sub->add_option("--optics-eps-percentile", optics_eps_percentile,
                                          "reachability quantile used as extraction threshold")
                              ->check(CLI::Range(0.0, 1.0)));
    };

    auto* features = app.add_subcommand("features", "write feature matrices and per-class summaries");
    auto* experiment = app.add_subcommand("experiment", "run grid-search experiments");
    auto* report = app.add_subcommand("report", "re-aggregate and print an existing report");
    auto* synth = app.add_subcommand("synth", "write synthetic data sets as CSV plus manifests");
    for (auto* sub : {features, experiment, report, synth}) {
        add_common(sub);
    }
    add_grid(experiment);
    report->add_option("--which", which, "q1|q2|q3|q4|q5|all");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : 2;
    }

    auto given = [&](const std::string& flag) {
        for (auto* sub : app.get_subcommands()) {
            if (const auto* opt = sub->get_option_no_throw(flag); opt != nullptr && opt->count() > 0) {
                return true;
            }
        }
        return false;
    };

    try {
        RunConfig config = config_path.empty() ? default_config() : load_config(config_path);
        if (given("--which")) {
            config.which = which;
            std::transform(config.which.begin(), config.which.end(), config.which.begin(),
                           [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
        }
        if (given("--runs")) {
            config.runs_per_setting = runs;
        }
        if (given("--jobs")) {
            config.jobs = jobs;
        }
        if (given("--out")) {
            config.out_dir = out_dir;
        }
        if (given("--seed-salt")) {
            config.seed_salt = seed_salt;
        }
        if (given("--savgol-window")) {
            config.savgol.window_size = savgol_window;
        }
        if (given("--savgol-order")) {
            config.savgol.poly_order = savgol_order;
        }
        if (given("--normalization")) {
            config.normalization = parse_normalization_scope(normalization);
        }
        if (given("--optics-min-samples")) {
            config.optics.min_samples = optics_min_samples;
        }
        if (given("--optics-max-eps")) {
            config.optics.max_eps = optics_max_eps;
        }
        if (given("--optics-eps-percentile")) {
            config.optics.eps_percentile = optics_eps_percentile;
        }
        config.verbosity = std::max(config.verbosity, verbose);

        if (features->parsed()) {
            return cmd_features(config, out);
        }
        if (experiment->parsed()) {
            return cmd_experiment(config, out);
        }
        if (report->parsed()) {
            return cmd_report(config, out);
        }
        return cmd_synth(config, out);
    } catch (const Error& e) {
        err << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace vibclust::cli

#endif  // VIBCLUST_CLI_HPP
