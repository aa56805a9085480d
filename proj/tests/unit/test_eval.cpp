#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "oracles.hpp"
#include "support.hpp"
#include "vibclust/eval/grid.hpp"
#include "vibclust/eval/purity.hpp"
#include "vibclust/eval/report.hpp"
#include "vibclust/eval/trial.hpp"
#include "vibclust/suite.hpp"

using namespace vibclust;

using I = std::vector<int>;

// ---------------------------------------------------------------------------
// Purity

TEST_CASE("purity examples", "[eval][purity]") {
    CHECK(purity(I{0, 0, 1, 1}, I{0, 0, 1, 1}) == 1.0);
    CHECK(purity(I{0, 0, 0, 0}, I{0, 1, 0, 1}) == 0.5);
    CHECK(std::abs(purity(I{0, 0, 0, 1, 1, 1}, I{0, 0, 1, 1, 1, 2}) - 4.0 / 6.0) < 1e-15);
    // noise points pool into one cluster
    CHECK(purity(I{-1, -1, -1, 0}, I{0, 1, 1, 0}) == 0.75);
    CHECK_THROWS_AS(purity(I{0, 1}, I{0}), Error);
    CHECK_THROWS_AS(purity(I{}, I{}), Error);
}

TEST_CASE("purity properties", "[eval][purity]") {
    Rng rng(101);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + rng.below(50);
        const int k = 1 + static_cast<int>(rng.below(8));
        const int classes = 1 + static_cast<int>(rng.below(5));
        I clusters(n);
        I labels(n);
        for (std::size_t i = 0; i < n; ++i) {
            clusters[i] = static_cast<int>(rng.below(static_cast<std::uint64_t>(k + 1))) - 1;
            labels[i] = static_cast<int>(rng.below(static_cast<std::uint64_t>(classes)));
        }
        const double p = purity(clusters, labels);
        CHECK(p == oracle::purity(clusters, labels));
        CHECK(majority_count(clusters, labels) <= n);

        // relabel clusters and classes
        std::vector<int> cperm(static_cast<std::size_t>(k));
        std::iota(cperm.begin(), cperm.end(), 0);
        rng.shuffle(cperm);
        std::vector<int> lperm(static_cast<std::size_t>(classes));
        std::iota(lperm.begin(), lperm.end(), 0);
        rng.shuffle(lperm);
        I c2 = clusters;
        I l2 = labels;
        for (std::size_t i = 0; i < n; ++i) {
            if (c2[i] >= 0) {
                c2[i] = cperm[static_cast<std::size_t>(c2[i])];
            }
            l2[i] = lperm[static_cast<std::size_t>(l2[i])];
        }
        CHECK(purity(c2, l2) == p);

        // splitting a cluster never lowers purity
        I split = clusters;
        const int target = static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));
        for (std::size_t i = 0; i < n; ++i) {
            if (split[i] == target && rng.uniform() < 0.5) {
                split[i] = k;
            }
        }
        CHECK(purity(split, labels) >= p);

        I singletons(n);
        std::iota(singletons.begin(), singletons.end(), 0);
        CHECK(purity(singletons, labels) == 1.0);
    }
}

// ---------------------------------------------------------------------------
// Trials

namespace {

WindowedDataset separable_dataset() {
    SyntheticSpec s;
    s.name = "sep";
    s.num_classes = 3;
    s.windows_per_class = 10;
    s.window_length = 128;
    s.class_profiles = {{1.0, 5, 0.0}, {3.0, 5, 0.0}, {9.0, 5, 0.0}};
    return generate_synthetic(s);
}

TrialSpec spec_for(Algorithm a, FeatureRef f, std::string dataset = "sep") {
    TrialSpec s;
    s.experiment = "Q1";
    s.dataset_id = std::move(dataset);
    s.algorithm = a;
    s.features = {f};
    s.seed = derive_seed(s, "");
    return s;
}

}  // namespace

TEST_CASE("separable data gives purity 1 with k-means", "[eval][trial]") {
    DatasetCatalog catalog;
    catalog.add(separable_dataset());
    const auto r = run_trial(spec_for(Algorithm::KMeans, {FeatureKind::AbsMean, Domain::TimeDomain}), catalog);
    REQUIRE(r.ok);
    CHECK(r.purity == 1.0);
    CHECK(r.requested_clusters == 3);
    CHECK(r.noise_fraction == 0.0);
}

TEST_CASE("identical specs give identical results", "[eval][trial]") {
    DatasetCatalog catalog;
    catalog.add(generate_synthetic(circulation_pump_spec()));
    for (const auto a : {Algorithm::KMeans, Algorithm::GMM, Algorithm::OPTICS}) {
        auto s = spec_for(a, {FeatureKind::IQR, Domain::FrequencyDomain}, "synth-circulation");
        s.cluster_rule = a == Algorithm::OPTICS ? ClusterCountRule::conditions() : ClusterCountRule::scaled(1.5);
        const auto x = run_trial(s, catalog);
        const auto y = run_trial(s, catalog);
        REQUIRE(x.ok);
        CHECK(x.purity == y.purity);
        CHECK(x.effective_clusters == y.effective_clusters);
        CHECK(x.noise_fraction == y.noise_fraction);
    }
}

TEST_CASE("all-noise OPTICS trial scores the majority class fraction", "[eval][trial]") {
    // with max_eps below every pairwise distance each point is noise
    SyntheticSpec s;
    s.name = "unbalanced";
    s.num_classes = 2;
    s.windows_per_class = 6;
    s.window_length = 64;
    s.class_profiles = {{1.0, 3, 0.3}, {2.0, 3, 0.3}};
    auto ds = generate_synthetic(s);
    ds.samples.resize(10 * 64);
    ds.labels.resize(10);
    const auto counts = ds.class_counts();
    const double majority = static_cast<double>(std::max(counts[0], counts[1])) / 10.0;
    DatasetCatalog catalog;
    catalog.add(ds);
    ExperimentOptions opts;
    opts.optics.min_samples = 10;
    opts.optics.max_eps = 1e-9;
    const auto r = run_trial(spec_for(Algorithm::OPTICS, {FeatureKind::Std, Domain::TimeDomain}, "unbalanced"),
                             catalog, opts);
    REQUIRE(r.ok);
    CHECK(r.noise_fraction == 1.0);
    CHECK(r.purity == majority);
}

TEST_CASE("failed trials are captured, not thrown", "[eval][trial]") {
    DatasetCatalog catalog;
    catalog.add(separable_dataset());
    auto s = spec_for(Algorithm::KMeans, {FeatureKind::Std, Domain::TimeDomain});
    s.dataset_id = "missing";
    const auto r = run_trial(s, catalog);
    CHECK_FALSE(r.ok);
    CHECK(r.error.find("missing") != std::string::npos);

    auto too_many = spec_for(Algorithm::KMeans, {FeatureKind::Std, Domain::TimeDomain});
    too_many.pca_components = 4;  // one column only
    CHECK_FALSE(run_trial(too_many, catalog).ok);

    auto bad_factor = spec_for(Algorithm::KMeans, {FeatureKind::Std, Domain::TimeDomain});
    bad_factor.cluster_rule = ClusterCountRule::scaled(3.0);
    CHECK_FALSE(run_trial(bad_factor, catalog).ok);
}

TEST_CASE("cluster rules", "[eval][trial]") {
    CHECK(scaled_cluster_count(1.25, 6) == 8);   // 7.5 rounds up
    CHECK(scaled_cluster_count(1.25, 3) == 4);   // 3.75
    CHECK(scaled_cluster_count(1.75, 2) == 4);   // 3.5 rounds up
    CHECK(scaled_cluster_count(1.5, 5) == 8);    // 7.5
    CHECK(parse_cluster_rule("1.5n") == ClusterCountRule::scaled(1.5));
    CHECK(parse_cluster_rule("n") == ClusterCountRule::conditions());
    CHECK(parse_cluster_rule("elbow") == ClusterCountRule::elbow());
    CHECK(ClusterCountRule::scaled(1.25).name() == "1.25n");
    CHECK_THROWS_AS(parse_cluster_rule("3n"), Error);
    CHECK_THROWS_AS(parse_cluster_rule("x"), Error);
}

TEST_CASE("trial seeds are content hashes of the trial settings", "[eval][trial]") {
    auto a = spec_for(Algorithm::GMM, {FeatureKind::Std, Domain::TimeDomain});
    auto b = a;
    CHECK(derive_seed(a, "") == derive_seed(b, ""));
    b.run_index = 2;
    CHECK(derive_seed(a, "") != derive_seed(b, ""));
    CHECK(derive_seed(a, "") != derive_seed(a, "salt"));
}

// ---------------------------------------------------------------------------
// Grid

namespace {

GridConfig three_datasets() {
    GridConfig g;
    g.datasets = {"a", "b", "c"};
    return g;
}

TopFeatures fake_top() {
    TopFeatures top;
    top[Algorithm::KMeans] = {{FeatureKind::Std, Domain::TimeDomain},
                              {FeatureKind::IQR, Domain::TimeDomain},
                              {FeatureKind::Std, Domain::FrequencyDomain}};
    top[Algorithm::GMM] = {{FeatureKind::AbsMean, Domain::TimeDomain},
                           {FeatureKind::Std, Domain::TimeDomain},
                           {FeatureKind::AbsKurt, Domain::FrequencyDomain}};
    return top;
}

}  // namespace

TEST_CASE("grid sizes", "[eval][grid]") {
    const auto g = three_datasets();
    const auto top = fake_top();
    CHECK(expand_grid(Experiment::Q1, g).size() == 324);
    CHECK(expand_grid(Experiment::Q2, g).empty());
    CHECK(expand_grid(Experiment::Q3, g, &top).size() == 126);
    CHECK(expand_grid(Experiment::Q4, g, &top).size() == 90);
    CHECK(expand_grid(Experiment::Q5, g, &top).size() == 108);
    CHECK_THROWS_AS(expand_grid(Experiment::Q3, g), Error);
}

TEST_CASE("grid expansion is pure and every setting repeats runs_per_setting times", "[eval][grid]") {
    auto g = three_datasets();
    g.runs_per_setting = 4;
    const auto top = fake_top();
    for (const auto e : kAllExperiments) {
        const auto a = expand_grid(e, g, &top);
        const auto b = expand_grid(e, g, &top);
        CHECK(a == b);
        std::map<std::string, int> counts;
        std::set<std::uint64_t> seeds;
        for (const auto& s : a) {
            auto key = s;
            key.run_index = 0;
            key.seed = 0;
            ++counts[key.canonical_key()];
            CHECK(s.seed == derive_seed(s, g.seed_salt));
            seeds.insert(s.seed);
        }
        for (const auto& [key, n] : counts) {
            CHECK(n == 4);
        }
        CHECK(seeds.size() == a.size());
    }
}

TEST_CASE("Q3 to Q5 settings", "[eval][grid]") {
    const auto g = three_datasets();
    const auto top = fake_top();
    std::set<std::string> q3_sets;
    for (const auto& s : expand_grid(Experiment::Q3, g, &top)) {
        CHECK(s.algorithm != Algorithm::OPTICS);
        if (s.algorithm == Algorithm::KMeans) {
            q3_sets.insert(feature_set_name(s.features));
        }
    }
    CHECK(q3_sets.size() == 7);
    CHECK(q3_sets.count("TD:Std+TD:IQR+FD:Std") == 1);

    std::set<std::string> pcs;
    for (const auto& s : expand_grid(Experiment::Q4, g, &top)) {
        pcs.insert(s.pca_label());
        CHECK(s.features.size() == 3);
    }
    CHECK(pcs == std::set<std::string>{"none", "6", "4", "2", "1"});

    std::set<std::string> rules;
    for (const auto& s : expand_grid(Experiment::Q5, g, &top)) {
        rules.insert(s.cluster_rule.name());
    }
    CHECK(rules == std::set<std::string>{"elbow", "n", "1.25n", "1.5n", "1.75n", "2n"});
}

TEST_CASE("top features rank by mean purity with alphabetical ties", "[eval][grid]") {
    std::vector<TrialResult> ledger;
    auto add = [&](Algorithm a, FeatureRef f, double p) {
        TrialResult r;
        r.spec = spec_for(a, f, "x");
        r.ok = true;
        r.purity = p;
        ledger.push_back(r);
    };
    add(Algorithm::KMeans, {FeatureKind::Std, Domain::TimeDomain}, 0.9);
    add(Algorithm::KMeans, {FeatureKind::IQR, Domain::TimeDomain}, 0.8);
    add(Algorithm::KMeans, {FeatureKind::AbsMean, Domain::TimeDomain}, 0.8);
    add(Algorithm::KMeans, {FeatureKind::AbsKurt, Domain::FrequencyDomain}, 0.2);
    add(Algorithm::GMM, {FeatureKind::AbsSkew, Domain::FrequencyDomain}, 0.7);
    TrialResult failed;
    failed.spec = spec_for(Algorithm::KMeans, {FeatureKind::AbsMedian, Domain::TimeDomain}, "x");
    ledger.push_back(failed);

    const auto top = top_features(ledger);
    REQUIRE(top.at(Algorithm::KMeans).size() == 3);
    CHECK(top.at(Algorithm::KMeans)[0].name() == "TD:Std");
    CHECK(top.at(Algorithm::KMeans)[1].name() == "TD:AbsMean");
    CHECK(top.at(Algorithm::KMeans)[2].name() == "TD:IQR");
    CHECK(top.at(Algorithm::GMM).size() == 1);
}

TEST_CASE("parallel trial execution matches serial", "[eval][grid]") {
    DatasetCatalog catalog;
    catalog.add(generate_synthetic(circulation_pump_spec()));
    GridConfig g;
    g.datasets = {"synth-circulation"};
    g.runs_per_setting = 1;
    const auto specs = expand_grid(Experiment::Q1, g);
    const auto serial = run_trials(specs, catalog, {}, 1);
    const auto parallel = run_trials(specs, catalog, {}, 4);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].spec == parallel[i].spec);
        CHECK(serial[i].purity == parallel[i].purity);
    }
}

// ---------------------------------------------------------------------------
// Aggregation

namespace {

TrialResult fabricated(Rng& rng, int run) {
    TrialResult r;
    r.spec.experiment = rng.uniform() < 0.5 ? "Q1" : "Q5";
    r.spec.dataset_id = std::string(1, static_cast<char>('a' + rng.below(2)));
    r.spec.algorithm = rng.uniform() < 0.5 ? Algorithm::KMeans : Algorithm::GMM;
    r.spec.features = {{static_cast<FeatureKind>(rng.below(2)), Domain::TimeDomain}};
    r.spec.cluster_rule = rng.uniform() < 0.5 ? ClusterCountRule::conditions() : ClusterCountRule::scaled(2.0);
    r.spec.run_index = run;
    r.ok = rng.uniform() > 0.1;
    if (r.ok) {
        r.purity = rng.uniform();
        r.effective_clusters = 1 + rng.below(4);
    } else {
        r.error = "boom";
    }
    return r;
}

}  // namespace

TEST_CASE("aggregate examples", "[eval][report]") {
    TrialResult r;
    r.spec = spec_for(Algorithm::KMeans, {FeatureKind::Std, Domain::TimeDomain});
    r.ok = true;
    r.purity = 0.42;
    const auto one = aggregate_report({r});
    REQUIRE(one.groups.size() == 1);
    CHECK(one.groups[0].second.mean == 0.42);
    CHECK(one.groups[0].second.std == 0.0);

    std::vector<TrialResult> three(3, r);
    three[0].purity = 0.5;
    three[1].purity = 0.6;
    three[1].spec.run_index = 2;
    three[2].purity = 0.7;
    three[2].spec.run_index = 3;
    const auto agg = aggregate_report(three);
    REQUIRE(agg.groups.size() == 1);
    CHECK(std::abs(agg.groups[0].second.mean - 0.6) < 1e-15);
    CHECK(agg.groups[0].second.runs == 3);

    three[1].ok = false;
    const auto with_failure = aggregate_report(three);
    CHECK(std::abs(with_failure.groups[0].second.mean - 0.6) < 1e-15);
    CHECK(with_failure.groups[0].second.failed == 1);
}

TEST_CASE("grouping matches a flat recomputation", "[eval][report]") {
    Rng rng(111);
    std::vector<TrialResult> ledger;
    for (int i = 0; i < 400; ++i) {
        ledger.push_back(fabricated(rng, i % 3 + 1));
    }
    const auto report = aggregate_report(ledger);

    // flat oracle: key string -> purities of successful members, plus totals
    std::map<std::string, std::vector<double>> purities;
    std::map<std::string, std::size_t> totals;
    for (const auto& r : ledger) {
        const auto& s = r.spec;
        const std::string key = s.experiment + "/" + std::string(to_string(s.algorithm)) + "/" +
                                feature_set_name(s.features) + "/" + s.dataset_id + "/" +
                                s.cluster_rule.name() + "/" + s.pca_label();
        ++totals[key];
        if (r.ok) {
            purities[key].push_back(r.purity);
        }
    }
    CHECK(report.groups.size() == totals.size());
    for (const auto& [k, stats] : report.groups) {
        const std::string key = k.experiment + "/" + k.algorithm + "/" + k.feature_set + "/" + k.dataset +
                                "/" + k.cluster_rule + "/" + k.pca;
        REQUIRE(totals.count(key) == 1);
        const auto& p = purities[key];
        CHECK(stats.runs == p.size());
        CHECK(stats.failed == totals[key] - p.size());
        if (p.empty()) {
            CHECK(std::isnan(stats.mean));
            continue;
        }
        const double mean = std::accumulate(p.begin(), p.end(), 0.0) / static_cast<double>(p.size());
        double ss = 0.0;
        for (const double v : p) {
            ss += (v - mean) * (v - mean);
        }
        CHECK(std::abs(stats.mean - mean) < 1e-12);
        CHECK(std::abs(stats.std - std::sqrt(ss / static_cast<double>(p.size()))) < 1e-12);
        CHECK(stats.min == *std::min_element(p.begin(), p.end()));
        CHECK(stats.max == *std::max_element(p.begin(), p.end()));
    }
}

TEST_CASE("trial results round-trip through JSON", "[eval][report]") {
    Rng rng(112);
    for (int i = 0; i < 50; ++i) {
        auto r = fabricated(rng, 1);
        r.spec.pca_components = i % 2 == 0 ? std::optional<std::size_t>(4) : std::nullopt;
        const nlohmann::json j = r;
        const auto back = j.get<TrialResult>();
        CHECK(back.spec == r.spec);
        CHECK(back.ok == r.ok);
        CHECK(back.purity == r.purity);
        CHECK(back.error == r.error);
    }
}
