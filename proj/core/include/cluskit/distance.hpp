#pragma once

#include "cluskit/types.hpp"

namespace cluskit {

/// Full matrix of squared Euclidean distances between rows of x. Each pair is
/// evaluated directly (not via the Gram expansion), so the result is exactly
/// symmetric with a zero diagonal.
inline Matrix pairwise_sq_dists(const Matrix& x) {
    const Eigen::Index n = x.rows();
    Matrix d2 = Matrix::Zero(n, n);
    for (Eigen::Index p = 0; p < n; ++p) {
        for (Eigen::Index q = p + 1; q < n; ++q) {
            const double d = (x.row(p) - x.row(q)).squaredNorm();
            d2(p, q) = d;
            d2(q, p) = d;
        }
    }
    return d2;
}

}  // namespace cluskit
