#ifndef VIBCLUST_CLUSTER_KMEANS_HPP
#define VIBCLUST_CLUSTER_KMEANS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "vibclust/cluster/assignment.hpp"
#include "vibclust/matrix.hpp"
#include "vibclust/random.hpp"

namespace vibclust {

struct KMeansParams {
    std::size_t k = 2;
    std::uint64_t seed = 0;
    int max_iter = 300;
    double tol = 1e-6;
};

struct KMeansModel {
    Matrix centroids;                  // [k x d]
    double wcss = 0.0;                 // at the final centroids
    int iterations_run = 0;            // centroid update steps performed
    std::uint64_t seed = 0;
    bool converged = false;
    std::vector<double> wcss_history;  // one entry per assignment step
};

struct KMeansResult {
    KMeansModel model;
    ClusterAssignment assignment;
};

/// Index of the nearest centroid (lowest index on ties) and its squared distance.
inline std::pair<int, double> nearest_centroid(const Matrix& centroids, std::span<const double> point) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centroids.rows(); ++c) {
        const double d = squared_distance(point, centroids.row(c));
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(c);
        }
    }
    return {best, best_d};
}

/// Sum of squared distances of every point to its nearest centroid.
inline double wcss_of(const Matrix& points, const Matrix& centroids) {
    double total = 0.0;
    for (std::size_t i = 0; i < points.rows(); ++i) {
        total += nearest_centroid(centroids, points.row(i)).second;
    }
    return total;
}

/// k-means++ seeding: first centre uniform, the rest drawn proportional to D^2.
inline Matrix kmeans_plus_plus(const Matrix& points, std::size_t k, Rng& rng) {
    const std::size_t n = points.rows();
    require(k >= 1 && k <= n, "k must lie in [1, num_points]");
    Matrix centroids(k, points.cols());
    std::vector<double> d2(n, std::numeric_limits<double>::infinity());

    auto take = [&](std::size_t slot, std::size_t idx) {
        std::copy(points.row(idx).begin(), points.row(idx).end(), centroids.row(slot).begin());
        for (std::size_t i = 0; i < n; ++i) {
            d2[i] = std::min(d2[i], squared_distance(points.row(i), points.row(idx)));
        }
    };

    take(0, static_cast<std::size_t>(rng.below(n)));
    for (std::size_t slot = 1; slot < k; ++slot) {
        double total = 0.0;
        for (const double v : d2) {
            total += v;
        }
        std::size_t pick = n - 1;
        if (total <= 0.0) {
            pick = static_cast<std::size_t>(rng.below(n));
        } else {
            const double target = rng.uniform() * total;
            double running = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                running += d2[i];
                if (running > target && d2[i] > 0.0) {
                    pick = i;
                    break;
                }
            }
        }
        take(slot, pick);
    }
    return centroids;
}

/// Lloyd iterations from the given centroids. Stops when no centroid moves by tol or more
/// (Euclidean) or after max_iter updates. A cluster left empty is moved onto the point
/// farthest from its own updated centroid.
inline KMeansResult kmeans_refine(const Matrix& points, Matrix centroids, int max_iter, double tol) {
    const std::size_t n = points.rows();
    const std::size_t d = points.cols();
    const std::size_t k = centroids.rows();
    require(centroids.cols() == d, "centroid dimension mismatch", ErrorCode::DimensionMismatch);
    require(k >= 1 && k <= n, "k must lie in [1, num_points]");
    require(max_iter >= 1, "max_iter must be positive");

    KMeansResult result;
    auto& model = result.model;
    std::vector<int> labels(n, 0);
    std::vector<double> cost(n, 0.0);

    for (;;) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto [c, dist] = nearest_centroid(centroids, points.row(i));
            labels[i] = c;
            cost[i] = dist;
            total += dist;
        }
        model.wcss_history.push_back(total);
        model.wcss = total;
        if (model.converged || model.iterations_run >= max_iter) {
            break;
        }

        Matrix updated(k, d);
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto c = static_cast<std::size_t>(labels[i]);
            ++counts[c];
            for (std::size_t j = 0; j < d; ++j) {
                updated(c, j) += points(i, j);
            }
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] == 0) {
                continue;
            }
            for (std::size_t j = 0; j < d; ++j) {
                updated(c, j) /= static_cast<double>(counts[c]);
            }
        }
        if (std::find(counts.begin(), counts.end(), 0) != counts.end()) {
            for (std::size_t i = 0; i < n; ++i) {
                const auto c = static_cast<std::size_t>(labels[i]);
                cost[i] = squared_distance(points.row(i), updated.row(c));
            }
            std::vector<bool> used(n, false);
            for (std::size_t c = 0; c < k; ++c) {
                if (counts[c] != 0) {
                    continue;
                }
                std::size_t far = 0;
                double far_d = -1.0;
                for (std::size_t i = 0; i < n; ++i) {
                    if (!used[i] && cost[i] > far_d) {
                        far_d = cost[i];
                        far = i;
                    }
                }
                used[far] = true;
                std::copy(points.row(far).begin(), points.row(far).end(), updated.row(c).begin());
            }
        }

        double shift = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            shift = std::max(shift, std::sqrt(squared_distance(centroids.row(c), updated.row(c))));
        }
        centroids = std::move(updated);
        ++model.iterations_run;
        model.converged = shift < tol;
    }

    model.centroids = std::move(centroids);
    result.assignment.assignments = std::move(labels);
    result.assignment.num_clusters = static_cast<int>(k);
    result.assignment.algorithm = Algorithm::KMeans;
    return result;
}

inline KMeansResult kmeans_fit(const Matrix& points, const KMeansParams& params) {
    require(params.k >= 1 && params.k <= points.rows(), "k must lie in [1, num_points]");
    require_finite_points(points);
    Rng rng(params.seed);
    auto result = kmeans_refine(points, kmeans_plus_plus(points, params.k, rng), params.max_iter,
                                params.tol);
    result.model.seed = params.seed;
    return result;
}

}  // namespace vibclust

#endif  // VIBCLUST_CLUSTER_KMEANS_HPP
