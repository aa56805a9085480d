#ifndef VIBCLUST_CLUSTER_GMM_HPP
#define VIBCLUST_CLUSTER_GMM_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <vector>

#include "vibclust/cluster/assignment.hpp"
#include "vibclust/cluster/kmeans.hpp"
#include "vibclust/matrix.hpp"

namespace vibclust {

struct GmmParams {
    std::size_t k = 2;
    std::uint64_t seed = 0;
    int max_iter = 200;
    double tol = 1e-6;
    double covariance_floor = 1e-6;
};

/// Mixture of axis-aligned Gaussians.
struct GmmModel {
    std::vector<double> weights;
    Matrix means;        // [k x d]
    Matrix covariances;  // [k x d] diagonal variances
    double log_likelihood = -std::numeric_limits<double>::infinity();
    std::uint64_t seed = 0;
    int iterations_run = 0;
    bool converged = false;
    std::vector<double> log_likelihood_history;

    std::size_t num_components() const noexcept { return weights.size(); }
};

struct GmmResult {
    GmmModel model;
    ClusterAssignment assignment;
};

/// Posterior component probabilities [n x k]; optionally returns the total log-likelihood.
inline Matrix gmm_responsibilities(const GmmModel& model, const Matrix& points,
                                   double* log_likelihood = nullptr) {
    const std::size_t n = points.rows();
    const std::size_t d = points.cols();
    const std::size_t k = model.num_components();
    require(model.means.cols() == d, "GMM dimension mismatch", ErrorCode::DimensionMismatch);

    std::vector<double> log_norm(k);
    for (std::size_t c = 0; c < k; ++c) {
        double s = std::log(model.weights[c]);
        for (std::size_t j = 0; j < d; ++j) {
            s -= 0.5 * std::log(2.0 * std::numbers::pi * model.covariances(c, j));
        }
        log_norm[c] = s;
    }

    Matrix resp(n, k);
    double total = 0.0;
    std::vector<double> logp(k);
    for (std::size_t i = 0; i < n; ++i) {
        double peak = -std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < k; ++c) {
            double q = 0.0;
            for (std::size_t j = 0; j < d; ++j) {
                const double diff = points(i, j) - model.means(c, j);
                q += diff * diff / model.covariances(c, j);
            }
            logp[c] = log_norm[c] - 0.5 * q;
            peak = std::max(peak, logp[c]);
        }
        double sum = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            sum += std::exp(logp[c] - peak);
        }
        const double lse = peak + std::log(sum);
        total += lse;
        for (std::size_t c = 0; c < k; ++c) {
            resp(i, c) = std::exp(logp[c] - lse);
        }
    }
    if (log_likelihood != nullptr) {
        *log_likelihood = total;
    }
    return resp;
}

namespace detail {

// Component weights never fall below this; a starved component keeps its previous shape.
inline constexpr double kMinComponentMass = 1e-12;

inline void gmm_m_step(GmmModel& model, const Matrix& points, const Matrix& resp, double floor) {
    const std::size_t n = points.rows();
    const std::size_t d = points.cols();
    const std::size_t k = model.num_components();
    double weight_sum = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
        double mass = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            mass += resp(i, c);
        }
        model.weights[c] = std::max(mass / static_cast<double>(n), kMinComponentMass);
        weight_sum += model.weights[c];
        if (mass <= kMinComponentMass * static_cast<double>(n)) {
            continue;
        }
        for (std::size_t j = 0; j < d; ++j) {
            double m = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                m += resp(i, c) * points(i, j);
            }
            m /= mass;
            double v = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double diff = points(i, j) - m;
                v += resp(i, c) * diff * diff;
            }
            model.means(c, j) = m;
            model.covariances(c, j) = std::max(v / mass, floor);
        }
    }
    for (double& w : model.weights) {
        w /= weight_sum;
    }
}

}  // namespace detail

/// EM for a diagonal-covariance mixture. Means start at k-means centroids (k-means++ seeded),
/// every component starts with the clamped global per-dimension variance and equal weight.
/// Stops when the log-likelihood gain drops below tol * max(1, |LL|); hitting max_iter leaves
/// converged == false but still returns the last (best) state.
inline GmmResult gmm_fit(const Matrix& points, const GmmParams& params) {
    const std::size_t n = points.rows();
    const std::size_t d = points.cols();
    require(params.k >= 1 && params.k <= n, "k must lie in [1, num_points]");
    require(params.max_iter >= 1, "max_iter must be positive");
    require(params.covariance_floor > 0.0, "covariance floor must be positive");
    require_finite_points(points);

    const auto init = kmeans_fit(points, KMeansParams{params.k, params.seed, 300, params.tol});

    GmmResult result;
    auto& model = result.model;
    model.seed = params.seed;
    model.weights.assign(params.k, 1.0 / static_cast<double>(params.k));
    model.means = init.model.centroids;
    model.covariances = Matrix(params.k, d);
    for (std::size_t j = 0; j < d; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            mean += points(i, j);
        }
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            var += (points(i, j) - mean) * (points(i, j) - mean);
        }
        var = std::max(var / static_cast<double>(n), params.covariance_floor);
        for (std::size_t c = 0; c < params.k; ++c) {
            model.covariances(c, j) = var;
        }
    }

    Matrix resp;
    for (;;) {
        double ll = 0.0;
        resp = gmm_responsibilities(model, points, &ll);
        if (!model.log_likelihood_history.empty()) {
            const double gain = ll - model.log_likelihood_history.back();
            model.converged = gain < params.tol * std::max(1.0, std::abs(ll));
        }
        model.log_likelihood_history.push_back(ll);
        model.log_likelihood = ll;
        if (model.converged || model.iterations_run >= params.max_iter) {
            break;
        }
        detail::gmm_m_step(model, points, resp, params.covariance_floor);
        ++model.iterations_run;
    }

    auto& assignment = result.assignment;
    assignment.algorithm = Algorithm::GMM;
    assignment.num_clusters = static_cast<int>(params.k);
    assignment.assignments.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t best = 0;
        for (std::size_t c = 1; c < params.k; ++c) {
            if (resp(i, c) > resp(i, best)) {
                best = c;
            }
        }
        assignment.assignments[i] = static_cast<int>(best);
    }
    return result;
}

}  // namespace vibclust

#endif  // VIBCLUST_CLUSTER_GMM_HPP
