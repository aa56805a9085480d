#ifndef VIBCLUST_CLUSTER_SERIALIZE_HPP
#define VIBCLUST_CLUSTER_SERIALIZE_HPP

#include <json.hpp>

#include "vibclust/cluster/gmm.hpp"
#include "vibclust/cluster/kmeans.hpp"
#include "vibclust/cluster/optics.hpp"
#include "vibclust/matrix.hpp"
#include "vibclust/reduce.hpp"

namespace vibclust {

inline void to_json(nlohmann::json& j, const Matrix& m) {
    j = nlohmann::json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        j.push_back(std::vector<double>(m.row(r).begin(), m.row(r).end()));
    }
}

inline void to_json(nlohmann::json& j, const KMeansModel& m) {
    j = nlohmann::json{{"centroids", m.centroids},     {"wcss", m.wcss},
                       {"iterations_run", m.iterations_run}, {"seed", m.seed},
                       {"converged", m.converged},     {"wcss_history", m.wcss_history}};
}

inline void to_json(nlohmann::json& j, const GmmModel& m) {
    j = nlohmann::json{{"weights", m.weights},
                       {"means", m.means},
                       {"covariances", m.covariances},
                       {"log_likelihood", m.log_likelihood},
                       {"seed", m.seed},
                       {"iterations_run", m.iterations_run},
                       {"converged", m.converged}};
}

// Infinite distances are written as null.
inline void to_json(nlohmann::json& j, const OpticsResult& r) {
    auto finite_or_null = [](const std::vector<double>& values) {
        auto out = nlohmann::json::array();
        for (const double v : values) {
            out.push_back(v == kInfinite ? nlohmann::json(nullptr) : nlohmann::json(v));
        }
        return out;
    };
    j = nlohmann::json{{"ordering", r.ordering},
                       {"reachability", finite_or_null(r.reachability)},
                       {"core_distance", finite_or_null(r.core_distance)},
                       {"min_samples", r.min_samples}};
}

inline void to_json(nlohmann::json& j, const PcaModel& m) {
    j = nlohmann::json{{"mean_vector", m.mean_vector},
                       {"component_matrix", m.component_matrix},
                       {"explained_variance", m.explained_variance}};
}

}  // namespace vibclust

#endif  // VIBCLUST_CLUSTER_SERIALIZE_HPP
