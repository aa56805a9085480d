#ifndef VIBCLUST_EVAL_PURITY_HPP
#define VIBCLUST_EVAL_PURITY_HPP

#include <algorithm>
#include <map>
#include <span>

#include "vibclust/cluster/assignment.hpp"
#include "vibclust/error.hpp"

namespace vibclust {

/// Sum over clusters of the size of the cluster's majority class. Noise points are pooled
/// into a single pseudo-cluster first.
inline std::size_t majority_count(std::span<const int> clusters, std::span<const int> labels) {
    require(!clusters.empty(), "purity needs at least one point");
    require(clusters.size() == labels.size(), "assignment and label lengths differ",
            ErrorCode::DimensionMismatch);
    std::map<int, std::map<int, std::size_t>> table;
    for (std::size_t i = 0; i < clusters.size(); ++i) {
        ++table[clusters[i]][labels[i]];
    }
    std::size_t total = 0;
    for (const auto& [cluster, counts] : table) {
        std::size_t best = 0;
        for (const auto& [label, count] : counts) {
            best = std::max(best, count);
        }
        total += best;
    }
    return total;
}

/// Purity = (1/N) * sum_m max_d |m intersect d|.
inline double purity(std::span<const int> clusters, std::span<const int> labels) {
    return static_cast<double>(majority_count(clusters, labels)) /
           static_cast<double>(clusters.size());
}

inline double purity(const ClusterAssignment& assignment, std::span<const int> labels) {
    return purity(assignment.assignments, labels);
}

}  // namespace vibclust

#endif  // VIBCLUST_EVAL_PURITY_HPP
