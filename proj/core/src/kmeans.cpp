#include "cluskit/kmeans.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <vector>

#include "cluskit/rng.hpp"

namespace cluskit {

namespace {

std::vector<int> assign_points(const Matrix& x, const Matrix& centers,
                               std::vector<double>* sq_dists) {
    const Eigen::Index n = x.rows();
    const Eigen::Index k = centers.rows();
    std::vector<int> labels(static_cast<std::size_t>(n), 0);
    if (sq_dists) {
        sq_dists->assign(static_cast<std::size_t>(n), 0.0);
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        int arg = 0;
        for (Eigen::Index c = 0; c < k; ++c) {
            const double d = (x.row(i) - centers.row(c)).squaredNorm();
            if (d < best) {
                best = d;
                arg = static_cast<int>(c);
            }
        }
        labels[static_cast<std::size_t>(i)] = arg;
        if (sq_dists) {
            (*sq_dists)[static_cast<std::size_t>(i)] = best;
        }
    }
    return labels;
}

Matrix recompute_centers(const Matrix& x, const std::vector<int>& labels, int k,
                         const Matrix& previous) {
    const Eigen::Index n = x.rows();
    Matrix centers = Matrix::Zero(k, x.cols());
    std::vector<std::int64_t> counts(static_cast<std::size_t>(k), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
        const int c = labels[static_cast<std::size_t>(i)];
        centers.row(c) += x.row(i);
        ++counts[static_cast<std::size_t>(c)];
    }
    for (int c = 0; c < k; ++c) {
        if (counts[static_cast<std::size_t>(c)] > 0) {
            centers.row(c) /= static_cast<double>(counts[static_cast<std::size_t>(c)]);
        } else {
            centers.row(c) = previous.row(c);
        }
    }

    // Reseed each empty cluster at the point farthest from its own center.
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    for (int c = 0; c < k; ++c) {
        if (counts[static_cast<std::size_t>(c)] > 0) {
            continue;
        }
        double best = -1.0;
        Eigen::Index arg = 0;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (used[static_cast<std::size_t>(i)]) {
                continue;
            }
            const int owner = labels[static_cast<std::size_t>(i)];
            const double d = (x.row(i) - centers.row(owner)).squaredNorm();
            if (d > best) {
                best = d;
                arg = i;
            }
        }
        centers.row(c) = x.row(arg);
        used[static_cast<std::size_t>(arg)] = true;
    }
    return centers;
}

}  // namespace

Matrix kmeanspp_seed(const Matrix& x, int k, std::mt19937_64& rng) {
    check_matrix_finite(x, "kmeanspp_seed");
    const Eigen::Index n = x.rows();
    if (k < 1 || static_cast<Eigen::Index>(k) > n) {
        throw std::invalid_argument("kmeanspp_seed: k must be in [1, N], got " +
                                    std::to_string(k));
    }

    Matrix centers(k, x.cols());
    std::vector<bool> chosen(static_cast<std::size_t>(n), false);
    const auto first = static_cast<Eigen::Index>(uniform_index(rng, static_cast<std::uint64_t>(n)));
    centers.row(0) = x.row(first);
    chosen[static_cast<std::size_t>(first)] = true;

    std::vector<double> min_d2(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        min_d2[static_cast<std::size_t>(i)] = (x.row(i) - centers.row(0)).squaredNorm();
    }

    for (int c = 1; c < k; ++c) {
        double total = 0.0;
        for (double d : min_d2) {
            total += d;
        }
        Eigen::Index pick = -1;
        if (total > 0.0) {
            const double r = uniform_unit(rng) * total;
            double cum = 0.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                cum += min_d2[static_cast<std::size_t>(i)];
                if (cum > r) {
                    pick = i;
                    break;
                }
            }
            if (pick < 0) {
                for (Eigen::Index i = n - 1; i >= 0; --i) {
                    if (min_d2[static_cast<std::size_t>(i)] > 0.0) {
                        pick = i;
                        break;
                    }
                }
            }
        }
        if (pick < 0) {
            // Candidates all coincide with chosen centers; take the lowest
            // index not selected yet.
            for (Eigen::Index i = 0; i < n; ++i) {
                if (!chosen[static_cast<std::size_t>(i)]) {
                    pick = i;
                    break;
                }
            }
        }
        centers.row(c) = x.row(pick);
        chosen[static_cast<std::size_t>(pick)] = true;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double d = (x.row(i) - centers.row(c)).squaredNorm();
            if (d < min_d2[static_cast<std::size_t>(i)]) {
                min_d2[static_cast<std::size_t>(i)] = d;
            }
        }
    }
    return centers;
}

ClusteringResult kmeans_fit(const Matrix& x, const KmeansConfig& cfg) {
    check_matrix_finite(x, "kmeans_fit");
    if (cfg.k < 1 || static_cast<Eigen::Index>(cfg.k) > x.rows()) {
        throw std::invalid_argument("kmeans_fit: k must be in [1, N], got " +
                                    std::to_string(cfg.k));
    }
    if (cfg.n_init < 1) {
        throw std::invalid_argument("kmeans_fit: n_init must be >= 1");
    }
    if (cfg.max_iters < 1) {
        throw std::invalid_argument("kmeans_fit: max_iters must be >= 1");
    }

    ClusteringResult best;
    best.algorithm = "kmeanspp";
    best.n_clusters = cfg.k;
    double best_inertia = std::numeric_limits<double>::infinity();
    std::map<std::string, double> restart_stats;

    for (int restart = 0; restart < cfg.n_init; ++restart) {
        std::mt19937_64 rng(cfg.seed + static_cast<std::uint64_t>(restart));
        Matrix centers = kmeanspp_seed(x, cfg.k, rng);
        std::vector<int> labels = assign_points(x, centers, nullptr);
        int iterations = 0;
        for (int it = 1; it <= cfg.max_iters; ++it) {
            centers = recompute_centers(x, labels, cfg.k, centers);
            std::vector<int> next = assign_points(x, centers, nullptr);
            iterations = it;
            if (next == labels) {
                break;
            }
            labels = std::move(next);
        }

        // Inertia of the final partition against its own cluster means.
        centers = recompute_centers(x, labels, cfg.k, centers);
        double inertia = 0.0;
        for (Eigen::Index i = 0; i < x.rows(); ++i) {
            inertia += (x.row(i) - centers.row(labels[static_cast<std::size_t>(i)])).squaredNorm();
        }
        restart_stats["restart_inertia_" + std::to_string(restart)] = inertia;

        if (inertia < best_inertia) {
            best_inertia = inertia;
            best.labels = labels;
            best.stats["inertia"] = inertia;
            best.stats["iterations"] = static_cast<double>(iterations);
            best.stats["best_restart"] = static_cast<double>(restart);
        }
    }
    best.stats.insert(restart_stats.begin(), restart_stats.end());
    return best;
}

}  // namespace cluskit
