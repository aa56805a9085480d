// Generates the synthetic pump data set, clusters it with each algorithm on two features and
// prints purity, then shows the K-means elbow choice.

#include <iomanip>
#include <iostream>

#include "vibclust/vibclust.hpp"

int main() {
    using namespace vibclust;

    const auto raw = generate_synthetic(pump_bench_spec());
    const auto clean = preprocess_pipeline(raw, SavGolParams{});
    std::cout << raw.name << ": " << raw.num_windows() << " windows, " << raw.num_channels
              << " channels, " << raw.num_classes << " conditions\n";

    const FeatureRef picks[] = {{FeatureKind::Std, Domain::TimeDomain},
                                {FeatureKind::AbsKurt, Domain::TimeDomain},
                                {FeatureKind::Std, Domain::FrequencyDomain}};
    const auto k = static_cast<std::size_t>(raw.num_classes);
    for (const auto& ref : picks) {
        const FeatureKind kinds[] = {ref.kind};
        const auto fm = extract_features(clean, kinds, ref.domain);
        const auto km = kmeans_fit(fm.values, {k, 42});
        const auto gm = gmm_fit(fm.values, {k, 42});
        const auto op = optics_fit(fm.values);
        std::cout << std::left << std::setw(12) << ref.name() << std::right << std::fixed
                  << std::setprecision(3) << "  KMeans " << purity(km.assignment, fm.labels)
                  << "  GMM " << purity(gm.assignment, fm.labels) << "  OPTICS "
                  << purity(op.assignment, fm.labels) << " (" << op.assignment.noise_count()
                  << " noise)\n";
    }

    const FeatureKind std_kind[] = {FeatureKind::Std};
    const auto td_std = extract_features(clean, std_kind, Domain::TimeDomain);
    const auto elbow = elbow_curve(td_std.values, 2 * k + 2, 42);
    std::cout << "elbow picks k = " << elbow.k << " (true conditions: " << k << ")\n";
    return 0;
}
