#ifndef VIBCLUST_REDUCE_HPP
#define VIBCLUST_REDUCE_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "vibclust/features.hpp"
#include "vibclust/linalg.hpp"
#include "vibclust/matrix.hpp"

namespace vibclust {

struct PcaModel {
    std::vector<double> mean_vector;
    Matrix component_matrix;               // [num_components x num_features], orthonormal rows
    std::vector<double> explained_variance;  // eigenvalues of the sample covariance, non-increasing

    std::size_t num_components() const noexcept { return component_matrix.rows(); }
    std::size_t num_features() const noexcept { return component_matrix.cols(); }
};

/// Sample covariance (divisor n - 1) of the rows of `data`.
inline Matrix sample_covariance(const Matrix& data, const std::vector<double>& mean) {
    const std::size_t n = data.rows();
    const std::size_t d = data.cols();
    Matrix cov(d, d);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t i = 0; i < d; ++i) {
            const double di = data(r, i) - mean[i];
            for (std::size_t j = i; j < d; ++j) {
                cov(i, j) += di * (data(r, j) - mean[j]);
            }
        }
    }
    const double scale = 1.0 / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i; j < d; ++j) {
            cov(i, j) *= scale;
            cov(j, i) = cov(i, j);
        }
    }
    return cov;
}

inline PcaModel pca_fit(const Matrix& data, std::size_t num_components) {
    const std::size_t n = data.rows();
    const std::size_t d = data.cols();
    require(n >= 2, "PCA needs at least two rows");
    require(num_components >= 1 && num_components <= d,
            "number of principal components must lie in [1, num_features]");
    require(d <= n, "PCA needs at least as many rows as features");

    PcaModel model;
    model.mean_vector.assign(d, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < d; ++c) {
            model.mean_vector[c] += data(r, c);
        }
    }
    for (double& m : model.mean_vector) {
        m /= static_cast<double>(n);
    }

    const auto eig = jacobi_eigen(sample_covariance(data, model.mean_vector));
    model.component_matrix = Matrix(num_components, d);
    model.explained_variance.resize(num_components);
    for (std::size_t i = 0; i < num_components; ++i) {
        const auto v = eig.vectors.row(i);
        // sign: the largest-magnitude entry (first one on ties) is positive
        std::size_t arg = 0;
        for (std::size_t c = 1; c < d; ++c) {
            if (std::abs(v[c]) > std::abs(v[arg]) * (1.0 + 1e-12)) {
                arg = c;
            }
        }
        const double sign = v[arg] < 0.0 ? -1.0 : 1.0;
        for (std::size_t c = 0; c < d; ++c) {
            model.component_matrix(i, c) = sign * v[c];
        }
        model.explained_variance[i] = std::max(0.0, eig.values[i]);
    }
    return model;
}

inline PcaModel pca_fit(const FeatureMatrix& features, std::size_t num_components) {
    return pca_fit(features.values, num_components);
}

inline Matrix pca_project(const PcaModel& model, const Matrix& data) {
    require(data.cols() == model.num_features(), "feature count does not match the PCA model",
            ErrorCode::DimensionMismatch);
    Matrix out(data.rows(), model.num_components());
    std::vector<double> centered(data.cols());
    for (std::size_t r = 0; r < data.rows(); ++r) {
        for (std::size_t c = 0; c < data.cols(); ++c) {
            centered[c] = data(r, c) - model.mean_vector[c];
        }
        for (std::size_t k = 0; k < model.num_components(); ++k) {
            out(r, k) = dot(model.component_matrix.row(k), centered);
        }
    }
    return out;
}

/// Centered projection onto the components; columns become PC descriptors.
inline FeatureMatrix pca_transform(const PcaModel& model, const FeatureMatrix& features) {
    FeatureMatrix out;
    out.values = pca_project(model, features.values);
    out.labels = features.labels;
    out.degenerate_counts.assign(model.num_components(), 0);
    for (std::size_t k = 0; k < model.num_components(); ++k) {
        ColumnMeta meta;
        meta.principal_component = k;
        out.columns.push_back(meta);
    }
    return out;
}

/// Maps projected coordinates back to feature space (exact when all components are kept).
inline Matrix pca_inverse_transform(const PcaModel& model, const Matrix& projected) {
    require(projected.cols() == model.num_components(), "projection width does not match the model",
            ErrorCode::DimensionMismatch);
    Matrix out(projected.rows(), model.num_features());
    for (std::size_t r = 0; r < projected.rows(); ++r) {
        for (std::size_t c = 0; c < model.num_features(); ++c) {
            double v = model.mean_vector[c];
            for (std::size_t k = 0; k < model.num_components(); ++k) {
                v += projected(r, k) * model.component_matrix(k, c);
            }
            out(r, c) = v;
        }
    }
    return out;
}

}  // namespace vibclust

#endif  // VIBCLUST_REDUCE_HPP
