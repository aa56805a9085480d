#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "support.hpp"
#include "vibclust/features.hpp"

using namespace vibclust;

using V = std::vector<double>;

TEST_CASE("abs_mean", "[features]") {
    CHECK(abs_mean(V{1, -2, 3}) == 2.0);
    CHECK(abs_mean(V{0, 0}) == 0.0);
    Rng rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        const auto x = testing::random_vector(rng, 512, 10.0);
        CHECK(std::abs(abs_mean(x) - oracle::kahan_abs_mean(x)) < 1e-12);
    }
}

TEST_CASE("abs_median", "[features]") {
    CHECK(abs_median(V{1, -3, 2}) == 2.0);
    CHECK(abs_median(V{1, -3, 2, -5}) == 2.5);
    Rng rng(22);
    for (int trial = 0; trial < 1000; ++trial) {
        auto x = testing::random_vector(rng, 1 + rng.below(40));
        V mags;
        for (const double v : x) {
            mags.push_back(std::abs(v));
        }
        CHECK(abs_median(x) == Catch::Approx(oracle::quantile(mags, 0.5)).epsilon(1e-14).margin(1e-15));
    }
}

TEST_CASE("std", "[features]") {
    CHECK(std_dev(V{1, -1, 1, -1}) == 1.0);
    CHECK(std_dev(V(10, 4.5)) == 0.0);
    Rng rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        auto x = testing::random_vector(rng, 300, 4.0);
        for (auto& v : x) {
            v += 100.0;
        }
        const double ref = oracle::two_pass_std(x);
        CHECK(std::abs(std_dev(x) - ref) <= 1e-10 * ref);
    }
}

TEST_CASE("iqr", "[features]") {
    CHECK(iqr(V(7, -2.0)) == 0.0);
    CHECK(iqr(V{1, 2, 3, 4}) == 1.5);
    CHECK(iqr(V{0, 100}) == 50.0);
    CHECK(quantile_sorted(V{1, 2, 3, 4}, 0.25) == 1.75);
    CHECK(quantile_sorted(V{1, 2, 3, 4}, 0.75) == 3.25);
    Rng rng(24);
    for (int trial = 0; trial < 200; ++trial) {
        const auto x = testing::random_vector(rng, 2 + rng.below(60));
        const double ref = oracle::quantile(x, 0.75) - oracle::quantile(x, 0.25);
        CHECK(std::abs(iqr(x) - ref) < 1e-12);
    }
}

TEST_CASE("abs_skew", "[features]") {
    CHECK(std::abs(abs_skew(V{1, -2, 3})) < 1e-15);
    CHECK(abs_skew(V{0, 0, -3}) > 0.0);
    Rng rng(25);
    for (int trial = 0; trial < 20; ++trial) {
        const auto x = testing::random_vector(rng, 200);
        CHECK(std::abs(abs_skew(x) - oracle::abs_shape(x).first) < 1e-9);
    }
}

TEST_CASE("abs_kurt", "[features]") {
    CHECK(std::abs(abs_kurt(V{1, -1, 3, -3}) + 2.0) < 1e-14);
    Rng rng(26);
    const auto x = testing::random_vector(rng, 200000);
    // |N(0,1)| is half-normal: excess kurtosis 0.8691 (to 4 digits)
    CHECK(std::abs(abs_kurt(x) - 0.8691) < 0.05);
    CHECK(std::abs(abs_kurt(x) - oracle::abs_shape(x).second) < 1e-9);

    bool degenerate = false;
    CHECK(abs_kurt(V{2, -2, 2, -2}, &degenerate) == 0.0);
    CHECK(degenerate);
    degenerate = false;
    CHECK(abs_skew(V{5, 5, 5}, &degenerate) == 0.0);
    CHECK(degenerate);
}

TEST_CASE("features are permutation invariant and scale as documented", "[features]") {
    Rng rng(27);
    for (int trial = 0; trial < 30; ++trial) {
        auto x = testing::random_vector(rng, 64);
        auto y = x;
        rng.shuffle(y);
        const double c = 0.1 + 5.0 * rng.uniform();
        V scaled = x;
        V flipped = x;
        for (std::size_t i = 0; i < x.size(); ++i) {
            scaled[i] *= c;
            flipped[i] *= -c;
        }
        for (const auto kind : kAllFeatureKinds) {
            const double base = compute_feature(kind, x);
            CHECK(std::abs(compute_feature(kind, y) - base) < 1e-9);
            if (kind == FeatureKind::AbsSkew || kind == FeatureKind::AbsKurt) {
                CHECK(std::abs(compute_feature(kind, scaled) - base) < 1e-9);
                CHECK(std::abs(compute_feature(kind, flipped) - base) < 1e-9);
            } else {
                CHECK(std::abs(compute_feature(kind, scaled) - c * base) < 1e-9);
            }
        }
    }
}

namespace {

WindowedDataset two_amplitude_dataset(std::size_t channels, double noise) {
    SyntheticSpec s;
    s.num_classes = 2;
    s.windows_per_class = 12;
    s.window_length = 128;
    s.num_channels = channels;
    s.class_profiles = {{1.0, 4, noise}, {5.0, 6, noise}};
    s.seed = 31;
    return generate_synthetic(s);
}

}  // namespace

TEST_CASE("extract_features shape and column metadata", "[features]") {
    const auto ds = two_amplitude_dataset(3, 0.2);
    const auto fm = extract_features(ds, {FeatureKind::IQR}, Domain::FrequencyDomain);
    REQUIRE(fm.num_columns() == 3);
    REQUIRE(fm.num_windows() == ds.num_windows());
    CHECK(fm.labels == ds.labels);
    for (std::size_t c = 0; c < 3; ++c) {
        CHECK(fm.columns[c] == ColumnMeta{FeatureKind::IQR, Domain::FrequencyDomain, c, std::nullopt});
    }
    CHECK(fm.columns[2].name() == "FD:IQR:ch2");
}

TEST_CASE("noise-free amplitude classes separate on TD AbsMean", "[features]") {
    const auto ds = two_amplitude_dataset(1, 0.0);
    const auto fm = extract_features(ds, {FeatureKind::AbsMean}, Domain::TimeDomain);
    double max0 = -1e9;
    double min1 = 1e9;
    for (std::size_t w = 0; w < fm.num_windows(); ++w) {
        if (fm.labels[w] == 0) {
            max0 = std::max(max0, fm.values(w, 0));
        } else {
            min1 = std::min(min1, fm.values(w, 0));
        }
    }
    CHECK(max0 < min1);
}

TEST_CASE("multi-kind extraction is the concatenation of single kinds", "[features]") {
    const auto ds = two_amplitude_dataset(2, 0.3);
    for (const auto domain : kAllDomains) {
        const auto ab = extract_features(ds, {FeatureKind::Std, FeatureKind::AbsKurt}, domain);
        const auto a = extract_features(ds, {FeatureKind::Std}, domain);
        const auto b = extract_features(ds, {FeatureKind::AbsKurt}, domain);
        const auto joined = combine_features({a, b});
        CHECK(ab.values == joined.values);
        CHECK(ab.columns == joined.columns);
    }
}

TEST_CASE("combine_features identity, width and associativity", "[features]") {
    const auto ds = two_amplitude_dataset(2, 0.3);
    const auto a = extract_features(ds, {FeatureKind::AbsMean}, Domain::TimeDomain);
    const auto b = extract_features(ds, {FeatureKind::IQR}, Domain::FrequencyDomain);
    const auto c = extract_features(ds, {FeatureKind::AbsSkew}, Domain::TimeDomain);
    const auto only = combine_features({a});
    CHECK(only.values == a.values);
    CHECK(only.columns == a.columns);
    CHECK(combine_features({a, b}).num_columns() == a.num_columns() + b.num_columns());
    const auto left = combine_features({combine_features({a, b}), c});
    const auto flat = combine_features({a, b, c});
    CHECK(left.values == flat.values);
    CHECK(left.columns == flat.columns);

    auto other = a;
    other.labels.pop_back();
    CHECK_THROWS_AS(combine_features({a, other}), Error);
}

TEST_CASE("standardized columns are finite with zero mean and unit std", "[features]") {
    auto ds = two_amplitude_dataset(2, 0.4);
    // make channel 1 of every window constant so skew/kurt are degenerate there
    for (std::size_t w = 0; w < ds.num_windows(); ++w) {
        for (auto& v : ds.window(w, 1)) {
            v = 0.7;
        }
    }
    for (const auto domain : kAllDomains) {
        const auto fm = extract_features(ds, kAllFeatureKinds, domain);
        for (std::size_t c = 0; c < fm.num_columns(); ++c) {
            const auto col = fm.values.column(c);
            bool all_zero = true;
            for (const double v : col) {
                REQUIRE(std::isfinite(v));
                all_zero = all_zero && v == 0.0;
            }
            if (!all_zero) {
                double mean = 0.0;
                for (const double v : col) {
                    mean += v;
                }
                mean /= static_cast<double>(col.size());
                CHECK(std::abs(mean) < 1e-9);
                CHECK(std::abs(oracle::two_pass_std(col) - 1.0) < 1e-9);
            }
        }
        if (domain == Domain::TimeDomain) {
            // AbsSkew and AbsKurt of the constant channel were flagged in every window
            CHECK(fm.degenerate_counts[4 * 2 + 1] == ds.num_windows());
            CHECK(fm.degenerate_counts[5 * 2 + 1] == ds.num_windows());
        }
    }
}

TEST_CASE("feature name parsing", "[features]") {
    for (const auto kind : kAllFeatureKinds) {
        CHECK(parse_feature_kind(to_string(kind)) == kind);
    }
    CHECK(parse_domain("TD") == Domain::TimeDomain);
    CHECK(parse_domain("FD") == Domain::FrequencyDomain);
    CHECK_THROWS_AS(parse_feature_kind("Mean"), Error);
}
