#ifndef VIBCLUST_LINALG_HPP
#define VIBCLUST_LINALG_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "vibclust/error.hpp"
#include "vibclust/matrix.hpp"

namespace vibclust {

/// Thin Householder QR of a tall matrix (rows >= cols).
class HouseholderQr {
public:
    explicit HouseholderQr(Matrix a) : qr_(std::move(a)), beta_(qr_.cols(), 0.0) {
        const std::size_t m = qr_.rows();
        const std::size_t n = qr_.cols();
        require(m >= n, "QR needs rows >= cols", ErrorCode::DimensionMismatch);
        vectors_.assign(n, std::vector<double>(m, 0.0));
        for (std::size_t k = 0; k < n; ++k) {
            double norm = 0.0;
            for (std::size_t i = k; i < m; ++i) {
                norm += qr_(i, k) * qr_(i, k);
            }
            norm = std::sqrt(norm);
            auto& v = vectors_[k];
            if (norm == 0.0) {
                continue;
            }
            const double alpha = qr_(k, k) > 0.0 ? -norm : norm;
            for (std::size_t i = k; i < m; ++i) {
                v[i] = qr_(i, k);
            }
            v[k] -= alpha;
            double vnorm2 = 0.0;
            for (std::size_t i = k; i < m; ++i) {
                vnorm2 += v[i] * v[i];
            }
            beta_[k] = 2.0 / vnorm2;
            for (std::size_t j = k; j < n; ++j) {
                double s = 0.0;
                for (std::size_t i = k; i < m; ++i) {
                    s += v[i] * qr_(i, j);
                }
                s *= beta_[k];
                for (std::size_t i = k; i < m; ++i) {
                    qr_(i, j) -= s * v[i];
                }
            }
        }
    }

    double r(std::size_t i, std::size_t j) const { return qr_(i, j); }
    std::size_t rows() const { return qr_.rows(); }
    std::size_t cols() const { return qr_.cols(); }

    /// Returns Q * [z; 0] for z of length cols().
    std::vector<double> apply_q(const std::vector<double>& z) const {
        std::vector<double> y(qr_.rows(), 0.0);
        std::copy(z.begin(), z.end(), y.begin());
        for (std::size_t k = qr_.cols(); k-- > 0;) {
            if (beta_[k] == 0.0) {
                continue;
            }
            const auto& v = vectors_[k];
            double s = 0.0;
            for (std::size_t i = k; i < y.size(); ++i) {
                s += v[i] * y[i];
            }
            s *= beta_[k];
            for (std::size_t i = k; i < y.size(); ++i) {
                y[i] -= s * v[i];
            }
        }
        return y;
    }

    /// Solves R^T z = b by forward substitution.
    std::vector<double> solve_rt(const std::vector<double>& b) const {
        const std::size_t n = qr_.cols();
        std::vector<double> z(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            double s = b[i];
            for (std::size_t j = 0; j < i; ++j) {
                s -= qr_(j, i) * z[j];
            }
            require(qr_(i, i) != 0.0, "rank-deficient least-squares system");
            z[i] = s / qr_(i, i);
        }
        return z;
    }

private:
    Matrix qr_;
    std::vector<double> beta_;
    std::vector<std::vector<double>> vectors_;
};

struct SymmetricEigen {
    std::vector<double> values;  // non-increasing
    Matrix vectors;              // row i is the unit eigenvector for values[i]
};

/// Cyclic Jacobi rotations for a symmetric matrix. Eigenpairs are returned sorted by
/// decreasing eigenvalue (ties keep the original diagonal order).
inline SymmetricEigen jacobi_eigen(const Matrix& symmetric, int max_sweeps = 100) {
    const std::size_t n = symmetric.rows();
    require(n == symmetric.cols(), "eigendecomposition needs a square matrix",
            ErrorCode::DimensionMismatch);
    Matrix a = symmetric;
    Matrix v(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        v(i, i) = 1.0;
    }

    double scale = 0.0;
    for (const double x : a.data()) {
        scale = std::max(scale, std::abs(x));
    }
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                off += a(p, q) * a(p, q);
            }
        }
        if (off <= 1e-30 * scale * scale || off == 0.0) {
            break;
        }
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) {
                    continue;
                }
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = std::copysign(1.0, theta) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });
    SymmetricEigen out;
    out.values.resize(n);
    out.vectors = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        out.values[i] = a(order[i], order[i]);
        for (std::size_t k = 0; k < n; ++k) {
            out.vectors(i, k) = v(k, order[i]);
        }
    }
    return out;
}

}  // namespace vibclust

#endif  // VIBCLUST_LINALG_HPP
