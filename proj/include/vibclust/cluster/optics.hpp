#ifndef VIBCLUST_CLUSTER_OPTICS_HPP
#define VIBCLUST_CLUSTER_OPTICS_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <utility>
#include <vector>

#include "vibclust/cluster/assignment.hpp"
#include "vibclust/matrix.hpp"

namespace vibclust {

inline constexpr double kInfinite = std::numeric_limits<double>::infinity();

struct OpticsParams {
    std::size_t min_samples = 5;
    double max_eps = kInfinite;
    double eps_percentile = 0.9;  // extraction threshold: this quantile of finite reachabilities
};

struct OpticsResult {
    std::vector<std::size_t> ordering;  // processing order (a permutation of point indices)
    std::vector<double> reachability;   // indexed by point; kInfinite when undefined
    std::vector<double> core_distance;  // indexed by point; kInfinite when not core at max_eps
    // Per point: min over other points q of max(core_distance[q], d(q, p)), and the q attaining
    // it (lowest index on ties). Unlike reachability this does not depend on processing order.
    std::vector<double> best_reachability;
    std::vector<std::size_t> best_anchor;
    std::size_t min_samples = 0;
};

/// Distance to the min_samples-th nearest neighbour, counting the point itself.
inline std::vector<double> core_distances(const Matrix& points, std::size_t min_samples,
                                          double max_eps) {
    const std::size_t n = points.rows();
    std::vector<double> core(n, kInfinite);
    std::vector<double> dist(n);
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = 0; q < n; ++q) {
            dist[q] = std::sqrt(squared_distance(points.row(p), points.row(q)));
        }
        std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(min_samples - 1),
                         dist.end());
        const double c = dist[min_samples - 1];
        core[p] = c <= max_eps ? c : kInfinite;
    }
    return core;
}

/// OPTICS cluster ordering. Unprocessed points are started in index order; the seed list is
/// ordered by (reachability, index).
inline OpticsResult optics_order(const Matrix& points, std::size_t min_samples, double max_eps = kInfinite) {
    const std::size_t n = points.rows();
    require(min_samples >= 1 && min_samples <= n, "min_samples must lie in [1, num_points]");
    require(max_eps > 0.0, "max_eps must be positive");
    require_finite_points(points);

    OpticsResult result;
    result.min_samples = min_samples;
    result.core_distance = core_distances(points, min_samples, max_eps);
    result.reachability.assign(n, kInfinite);
    result.ordering.reserve(n);

    std::vector<bool> processed(n, false);
    std::set<std::pair<double, std::size_t>> seeds;

    auto expand = [&](std::size_t p) {
        processed[p] = true;
        result.ordering.push_back(p);
        const double core = result.core_distance[p];
        if (core == kInfinite) {
            return;
        }
        for (std::size_t o = 0; o < n; ++o) {
            if (processed[o]) {
                continue;
            }
            const double d = std::sqrt(squared_distance(points.row(p), points.row(o)));
            if (d > max_eps) {
                continue;
            }
            const double reach = std::max(core, d);
            double& current = result.reachability[o];
            if (reach < current) {
                if (current != kInfinite) {
                    seeds.erase({current, o});
                }
                current = reach;
                seeds.insert({reach, o});
            }
        }
    };

    result.best_reachability.assign(n, kInfinite);
    result.best_anchor.assign(n, 0);
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = 0; q < n; ++q) {
            if (q == p || result.core_distance[q] == kInfinite) {
                continue;
            }
            const double d = std::sqrt(squared_distance(points.row(p), points.row(q)));
            if (d > max_eps) {
                continue;
            }
            const double reach = std::max(result.core_distance[q], d);
            if (reach < result.best_reachability[p]) {
                result.best_reachability[p] = reach;
                result.best_anchor[p] = q;
            }
        }
    }

    for (std::size_t start = 0; start < n; ++start) {
        if (processed[start]) {
            continue;
        }
        expand(start);
        while (!seeds.empty()) {
            const auto next = seeds.begin()->second;
            seeds.erase(seeds.begin());
            expand(next);
        }
    }
    return result;
}

/// DBSCAN-equivalent extraction at eps_prime: walking the ordering, a point whose
/// reachability exceeds eps_prime (or is undefined) opens a new cluster when it is core at
/// eps_prime and is noise otherwise; every other point joins the current cluster.
/// A non-core point left as noise only because it was processed before its core neighbour
/// then joins that neighbour's cluster, so the noise set equals DBSCAN's at (eps_prime, min_samples).
inline ClusterAssignment optics_extract(const OpticsResult& result, double eps_prime) {
    require(eps_prime > 0.0, "eps_prime must be positive");
    ClusterAssignment out;
    out.algorithm = Algorithm::OPTICS;
    out.assignments.assign(result.ordering.size(), kNoise);
    int current = kNoise;
    int next_id = 0;
    for (const std::size_t p : result.ordering) {
        const double reach = result.reachability[p];
        if (reach == kInfinite || reach > eps_prime) {
            if (result.core_distance[p] != kInfinite && result.core_distance[p] <= eps_prime) {
                current = next_id++;
                out.assignments[p] = current;
            } else {
                current = kNoise;
                out.assignments[p] = kNoise;
            }
        } else {
            out.assignments[p] = current;
        }
    }
    if (result.best_reachability.size() == result.ordering.size()) {
        for (const std::size_t p : result.ordering) {
            if (out.assignments[p] == kNoise && result.best_reachability[p] != kInfinite &&
                result.best_reachability[p] <= eps_prime) {
                out.assignments[p] = out.assignments[result.best_anchor[p]];
            }
        }
    }
    out.num_clusters = std::max(next_id, 1);
    return out;
}

/// Linear-interpolation quantile of the finite reachability values; kInfinite if none exist.
inline double reachability_quantile(const OpticsResult& result, double q) {
    std::vector<double> finite;
    for (const double r : result.reachability) {
        if (r != kInfinite) {
            finite.push_back(r);
        }
    }
    if (finite.empty()) {
        return kInfinite;
    }
    std::sort(finite.begin(), finite.end());
    const double pos = q * static_cast<double>(finite.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, finite.size() - 1);
    return finite[lo] + (pos - static_cast<double>(lo)) * (finite[hi] - finite[lo]);
}

struct OpticsFit {
    OpticsResult ordering;
    double eps_prime = 0.0;
    ClusterAssignment assignment;
};

inline OpticsFit optics_fit(const Matrix& points, const OpticsParams& params = {}) {
    OpticsFit fit;
    fit.ordering = optics_order(points, params.min_samples, params.max_eps);
    fit.eps_prime = reachability_quantile(fit.ordering, params.eps_percentile);
    if (fit.eps_prime <= 0.0) {
        // all finite reachabilities are zero (duplicate points)
        fit.eps_prime = std::numeric_limits<double>::min();
    }
    fit.assignment = optics_extract(fit.ordering, fit.eps_prime);
    return fit;
}

}  // namespace vibclust

#endif  // VIBCLUST_CLUSTER_OPTICS_HPP
