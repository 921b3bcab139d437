#include "cluskit/tsne.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <stdexcept>

#include "cluskit/distance.hpp"
#include "cluskit/rng.hpp"

namespace cluskit {

namespace {

constexpr double kProbFloor = 1e-12;
constexpr double kEntropyTolBits = 1e-5;
constexpr int kMaxBisectSteps = 50;

// Entropy in bits of the normalized Gaussian row at precision beta, plus the
// row itself. Distances are shifted by their minimum so the closest neighbor
// always keeps exp(0) = 1 and the normalization cannot underflow.
double gaussian_row(const Vector& sq_dists, double beta, Vector& row) {
    const double shift = sq_dists.minCoeff();
    row = (-beta * (sq_dists.array() - shift)).exp();
    row /= row.sum();
    double h_bits = 0.0;
    for (Eigen::Index j = 0; j < row.size(); ++j) {
        if (row(j) > 0.0) {
            h_bits -= row(j) * std::log2(row(j));
        }
    }
    return h_bits;
}

}  // namespace

PerplexityResult perplexity_search(const Vector& sq_dists, double target_perplexity) {
    if (sq_dists.size() < 1) {
        throw std::invalid_argument("perplexity_search needs at least one neighbor");
    }
    for (Eigen::Index j = 0; j < sq_dists.size(); ++j) {
        if (!std::isfinite(sq_dists(j)) || sq_dists(j) < 0.0) {
            throw std::invalid_argument("perplexity_search: invalid squared distance");
        }
    }
    if (!(target_perplexity > 0.0)) {
        throw std::invalid_argument("perplexity_search: target perplexity must be > 0");
    }

    PerplexityResult out;
    if (sq_dists.maxCoeff() == 0.0) {
        std::cerr << "perplexity_search: all distances zero; using the uniform row\n";
        out.sigma = 1.0;
        out.conditional =
            Vector::Constant(sq_dists.size(), 1.0 / static_cast<double>(sq_dists.size()));
        return out;
    }

    const double target_bits = std::log2(target_perplexity);
    double beta = 1.0;
    double beta_min = -std::numeric_limits<double>::infinity();
    double beta_max = std::numeric_limits<double>::infinity();
    Vector row;
    for (int step = 0; step < kMaxBisectSteps; ++step) {
        const double h_bits = gaussian_row(sq_dists, beta, row);
        const double diff = h_bits - target_bits;
        if (std::abs(diff) < kEntropyTolBits) {
            break;
        }
        if (diff > 0.0) {
            beta_min = beta;
            beta = std::isinf(beta_max) ? beta * 2.0 : 0.5 * (beta + beta_max);
        } else {
            beta_max = beta;
            beta = std::isinf(beta_min) ? beta * 0.5 : 0.5 * (beta + beta_min);
        }
    }
    gaussian_row(sq_dists, beta, row);
    out.sigma = std::sqrt(0.5 / beta);
    out.conditional = row;
    return out;
}

Matrix build_affinities(const Matrix& x, double perplexity) {
    check_matrix_finite(x, "build_affinities");
    const Eigen::Index n = x.rows();
    if (n < 3) {
        throw std::invalid_argument("build_affinities needs at least 3 rows");
    }
    if (!(perplexity > 0.0) || perplexity >= static_cast<double>(n)) {
        throw std::invalid_argument("build_affinities: perplexity must be in (0, N)");
    }

    const Matrix d2 = pairwise_sq_dists(x);
    Matrix cond = Matrix::Zero(n, n);
    Vector neighbor_d2(n - 1);
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::Index m = 0;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j != i) {
                neighbor_d2(m++) = d2(i, j);
            }
        }
        const PerplexityResult res = perplexity_search(neighbor_d2, perplexity);
        m = 0;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j != i) {
                cond(i, j) = res.conditional(m++);
            }
        }
    }

    Matrix p = (cond + cond.transpose()) / (2.0 * static_cast<double>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i != j && p(i, j) < kProbFloor) {
                p(i, j) = kProbFloor;
            }
        }
    }
    p /= p.sum();
    return p;
}

Matrix low_dim_affinities(const Matrix& y) {
    check_matrix_finite(y, "low_dim_affinities");
    const Eigen::Index n = y.rows();
    Matrix q = Matrix::Zero(n, n);
    double z = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double e = 1.0 / (1.0 + (y.row(i) - y.row(j)).squaredNorm());
            q(i, j) = e;
            q(j, i) = e;
            z += 2.0 * e;
        }
    }
    q /= z;
    return q;
}

double kl_divergence(const Matrix& p, const Matrix& q) {
    if (p.rows() != q.rows() || p.cols() != q.cols()) {
        throw std::invalid_argument("kl_divergence: shape mismatch");
    }
    double kl = 0.0;
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
        for (Eigen::Index j = 0; j < p.cols(); ++j) {
            if (i == j || p(i, j) <= 0.0) {
                continue;
            }
            if (q(i, j) <= 0.0) {
                throw std::invalid_argument("kl_divergence: q is zero where p is positive");
            }
            kl += p(i, j) * std::log(p(i, j) / q(i, j));
        }
    }
    return kl;
}

Matrix tsne_gradient(const Matrix& p, const Matrix& y) {
    if (p.rows() != y.rows() || p.rows() != p.cols()) {
        throw std::invalid_argument("tsne_gradient: shape mismatch");
    }
    const Eigen::Index n = y.rows();
    Matrix e(n, n);
    double z = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        e(i, i) = 0.0;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double v = 1.0 / (1.0 + (y.row(i) - y.row(j)).squaredNorm());
            e(i, j) = v;
            e(j, i) = v;
            z += 2.0 * v;
        }
    }
    Matrix grad = Matrix::Zero(n, y.cols());
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j == i) {
                continue;
            }
            const double mult = 4.0 * (p(i, j) - e(i, j) / z) * e(i, j);
            grad.row(i) += mult * (y.row(i) - y.row(j));
        }
    }
    return grad;
}

TsneResult tsne_embed(const Matrix& x, const TsneConfig& cfg) {
    check_matrix_finite(x, "tsne_embed");
    const Eigen::Index n = x.rows();
    if (n < 3) {
        throw std::invalid_argument("tsne_embed needs at least 3 rows");
    }
    if (!(cfg.perplexity > 0.0) || cfg.perplexity >= static_cast<double>(n)) {
        throw std::invalid_argument("tsne_embed: perplexity must be in (0, N)");
    }
    if (cfg.n_iters < 1) {
        throw std::invalid_argument("tsne_embed: n_iters must be >= 1");
    }
    if (!(cfg.learning_rate > 0.0)) {
        throw std::invalid_argument("tsne_embed: learning_rate must be > 0");
    }
    if (!(cfg.exaggeration >= 1.0)) {
        throw std::invalid_argument("tsne_embed: exaggeration must be >= 1");
    }
    if (cfg.exaggeration_iters < 0) {
        throw std::invalid_argument("tsne_embed: exaggeration_iters must be >= 0");
    }
    if (!(cfg.init_scale > 0.0)) {
        throw std::invalid_argument("tsne_embed: init_scale must be > 0");
    }

    const Matrix p = build_affinities(x, cfg.perplexity);

    std::mt19937_64 rng(cfg.seed);
    Matrix y = gaussian_matrix(n, 2, rng, cfg.init_scale);
    Matrix inc = Matrix::Zero(n, 2);
    Matrix gains = Matrix::Ones(n, 2);

    TsneResult out;
    out.kl_trace.reserve(static_cast<std::size_t>(cfg.n_iters));

    Matrix e(n, n);
    for (int iter = 0; iter < cfg.n_iters; ++iter) {
        const double p_factor = iter < cfg.exaggeration_iters ? cfg.exaggeration : 1.0;
        const double momentum =
            iter < cfg.momentum_switch_iter ? cfg.momentum_start : cfg.momentum_final;

        double z = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            e(i, i) = 0.0;
            for (Eigen::Index j = i + 1; j < n; ++j) {
                const double v = 1.0 / (1.0 + (y.row(i) - y.row(j)).squaredNorm());
                e(i, j) = v;
                e(j, i) = v;
                z += 2.0 * v;
            }
        }

        for (Eigen::Index i = 0; i < n; ++i) {
            Eigen::RowVector2d g = Eigen::RowVector2d::Zero();
            for (Eigen::Index j = 0; j < n; ++j) {
                if (j == i) {
                    continue;
                }
                const double mult = 4.0 * (p_factor * p(i, j) - e(i, j) / z) * e(i, j);
                g += mult * (y.row(i) - y.row(j));
            }
            for (Eigen::Index d = 0; d < 2; ++d) {
                const bool same_sign = (g(d) > 0.0) == (inc(i, d) > 0.0);
                gains(i, d) = same_sign ? gains(i, d) * 0.8 : gains(i, d) + 0.2;
                gains(i, d) = std::max(gains(i, d), 0.01);
                inc(i, d) = momentum * inc(i, d) - cfg.learning_rate * gains(i, d) * g(d);
            }
        }
        y += inc;
        y.rowwise() -= y.colwise().mean().eval();

        // KL against the true (unexaggerated) P at the updated embedding.
        double z_new = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = i + 1; j < n; ++j) {
                const double v = 1.0 / (1.0 + (y.row(i) - y.row(j)).squaredNorm());
                e(i, j) = v;
                e(j, i) = v;
                z_new += 2.0 * v;
            }
        }
        double kl = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) {
                if (i != j && p(i, j) > 0.0) {
                    kl += p(i, j) * std::log(p(i, j) / (e(i, j) / z_new));
                }
            }
        }
        out.kl_trace.push_back(kl);
    }

    out.embedding = std::move(y);
    out.final_kl = out.kl_trace.back();
    return out;
}

}  // namespace cluskit
