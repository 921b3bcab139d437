#pragma once

#include "cluskit/types.hpp"

#include <filesystem>

namespace cluskit {

/// Principal component model fitted via SVD of the centered data.
struct PcaModel {
    Vector mean;                ///< per-feature mean, length D
    Matrix components;          ///< k x D, orthonormal rows
    Vector explained_variance;  ///< length k, non-increasing

    int n_components() const { return static_cast<int>(components.rows()); }
    int n_features() const { return static_cast<int>(components.cols()); }
};

/// Fits a k-component model on x (N x D). Requires N >= 2 and
/// 1 <= k <= min(N, D). Each component's largest-magnitude entry is made
/// positive so the fit is sign-deterministic.
PcaModel pca_fit(const Matrix& x, int k);

/// Projects rows of x onto the component basis: (x - mean) * components^T.
Matrix pca_transform(const PcaModel& model, const Matrix& x);

/// Maps projected rows back to feature space: y * components + mean.
Matrix pca_inverse_transform(const PcaModel& model, const Matrix& y);

/// Model CSV layout: mean row, then k component rows, then the variance row.
void write_pca_model_csv(const PcaModel& model, const std::filesystem::path& path);
PcaModel read_pca_model_csv(const std::filesystem::path& path);

}  // namespace cluskit
