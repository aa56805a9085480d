#ifndef VIBCLUST_CLUSTER_ELBOW_HPP
#define VIBCLUST_CLUSTER_ELBOW_HPP

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "vibclust/cluster/kmeans.hpp"

namespace vibclust {

/// wcss[i] is WCSS at k = i + 1. Returns the k whose point (k, WCSS(k)) lies farthest from the
/// chord joining the first and last points; ties go to the smallest k.
inline std::size_t elbow_from_curve(std::span<const double> wcss) {
    require(wcss.size() >= 3, "elbow needs WCSS for at least k = 1..3");
    const double x0 = 1.0;
    const double y0 = wcss.front();
    const double dx = static_cast<double>(wcss.size()) - x0;
    const double dy = wcss.back() - y0;
    const double chord = std::hypot(dx, dy);
    double scale = 0.0;
    for (const double w : wcss) {
        scale = std::max(scale, std::abs(w));
    }

    std::size_t best = 1;
    double best_distance = 0.0;
    for (std::size_t i = 0; i < wcss.size(); ++i) {
        const double x = static_cast<double>(i + 1);
        const double distance = std::abs(dy * (x - x0) - dx * (wcss[i] - y0)) / chord;
        // improvements inside rounding noise do not count, so exact ties stay with smaller k
        if (distance > best_distance + 1e-12 * std::max(1.0, scale)) {
            best_distance = distance;
            best = i + 1;
        }
    }
    return best;
}

struct ElbowResult {
    std::size_t k = 1;
    std::vector<double> wcss;  // WCSS for k = 1..k_max
};

/// Runs k-means for k = 1..k_max (seeded identically) and applies elbow_from_curve.
inline ElbowResult elbow_curve(const Matrix& points, std::size_t k_max, std::uint64_t seed,
                               int max_iter = 300, double tol = 1e-6) {
    require(k_max >= 3, "k_max must be at least 3");
    require(k_max <= points.rows(), "k_max exceeds the number of points");
    ElbowResult out;
    for (std::size_t k = 1; k <= k_max; ++k) {
        out.wcss.push_back(kmeans_fit(points, KMeansParams{k, seed, max_iter, tol}).model.wcss);
    }
    out.k = elbow_from_curve(out.wcss);
    return out;
}

inline std::size_t elbow_select(const Matrix& points, std::size_t k_max, std::uint64_t seed) {
    return elbow_curve(points, k_max, seed).k;
}

}  // namespace vibclust

#endif  // VIBCLUST_CLUSTER_ELBOW_HPP
