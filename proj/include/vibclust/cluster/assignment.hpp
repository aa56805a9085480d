#ifndef VIBCLUST_CLUSTER_ASSIGNMENT_HPP
#define VIBCLUST_CLUSTER_ASSIGNMENT_HPP

#include <cmath>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "vibclust/error.hpp"
#include "vibclust/matrix.hpp"

namespace vibclust {

enum class Algorithm { KMeans, GMM, OPTICS };

inline std::string_view to_string(Algorithm a) {
    switch (a) {
        case Algorithm::KMeans: return "KMeans";
        case Algorithm::GMM: return "GMM";
        case Algorithm::OPTICS: return "OPTICS";
    }
    return "?";
}

inline Algorithm parse_algorithm(std::string_view text) {
    for (const auto a : {Algorithm::KMeans, Algorithm::GMM, Algorithm::OPTICS}) {
        if (to_string(a) == text) {
            return a;
        }
    }
    fail(ErrorCode::InvalidArgument, "unknown algorithm '" + std::string(text) + "'");
}

/// Cluster index used for points no density cluster claims.
inline constexpr int kNoise = -1;

struct ClusterAssignment {
    std::vector<int> assignments;
    int num_clusters = 0;
    Algorithm algorithm = Algorithm::KMeans;

    std::size_t size() const noexcept { return assignments.size(); }

    std::size_t noise_count() const {
        std::size_t n = 0;
        for (const int a : assignments) {
            n += a == kNoise ? 1 : 0;
        }
        return n;
    }

    /// Number of distinct non-noise clusters that actually received points.
    std::size_t occupied_clusters() const {
        std::set<int> seen;
        for (const int a : assignments) {
            if (a != kNoise) {
                seen.insert(a);
            }
        }
        return seen.size();
    }

    void validate() const {
        for (const int a : assignments) {
            require(a == kNoise ? algorithm == Algorithm::OPTICS : (a >= 0 && a < num_clusters),
                    "cluster index out of range");
        }
    }
};

inline void require_finite_points(const Matrix& points) {
    for (const double v : points.data()) {
        require(std::isfinite(v), "points contain non-finite values");
    }
}

}  // namespace vibclust

#endif  // VIBCLUST_CLUSTER_ASSIGNMENT_HPP
