#pragma once

#include "cluskit/types.hpp"

#include <cstdint>
#include <vector>

namespace cluskit {

struct TsneConfig {
    double perplexity = 30.0;
    int n_iters = 1000;
    double learning_rate = 200.0;
    double exaggeration = 4.0;         ///< P multiplier during the early phase
    int exaggeration_iters = 100;
    double momentum_start = 0.5;
    double momentum_final = 0.8;
    int momentum_switch_iter = 250;
    double init_scale = 1e-4;          ///< stddev of the Gaussian init
    std::uint64_t seed = 0;
};

/// Conditional distribution over one point's neighbors.
struct PerplexityResult {
    double sigma = 0.0;
    Vector conditional;  ///< sums to 1, aligned with the input distances
};

/// Bisects the Gaussian bandwidth until the entropy of the conditional
/// distribution matches log2(target) within 1e-5 bits, capped at 50 steps.
/// sq_dists holds squared distances to the point's neighbors (self excluded).
/// All-zero distances fall back to the uniform row with a warning.
PerplexityResult perplexity_search(const Vector& sq_dists, double target_perplexity);

/// Symmetrized input affinities: conditionals from perplexity_search,
/// averaged with their transpose, floored at 1e-12 off the diagonal, and
/// renormalized to sum to 1. Requires N >= 3 and perplexity < N.
Matrix build_affinities(const Matrix& x, double perplexity);

/// Student-t low-dimensional affinities q_ij: zero diagonal, sums to 1.
Matrix low_dim_affinities(const Matrix& y);

/// KL(p || q) over off-diagonal entries; empty p cells contribute zero.
/// Throws std::invalid_argument when q is zero where p is positive.
double kl_divergence(const Matrix& p, const Matrix& q);

/// Exact KL gradient at y: grad_i = 4 sum_j (p_ij - q_ij) (y_i - y_j)
/// / (1 + ||y_i - y_j||^2).
Matrix tsne_gradient(const Matrix& p, const Matrix& y);

struct TsneResult {
    Matrix embedding;              ///< N x 2, mean-centered
    double final_kl = 0.0;
    std::vector<double> kl_trace;  ///< KL against the true P, one per iteration
};

/// Full gradient-descent embedding with early exaggeration, the
/// momentum switch, and per-dimension gain adaptation. The embedding is
/// mean-centered after every update.
TsneResult tsne_embed(const Matrix& x, const TsneConfig& cfg);

}  // namespace cluskit
