#pragma once

#include "cluskit/types.hpp"

#include <cstdint>
#include <random>

namespace cluskit {

struct KmeansConfig {
    int k = 2;
    int n_init = 10;    ///< restarts; restart r uses seed + r
    int max_iters = 300;
    std::uint64_t seed = 0;
};

/// D^2-weighted seeding: the first center is uniform over rows, each further
/// center is drawn with probability proportional to the squared distance to
/// the nearest center already chosen. Requires 1 <= k <= N.
Matrix kmeanspp_seed(const Matrix& x, int k, std::mt19937_64& rng);

/// Lloyd iterations from a kmeans++ seeding, restarted n_init times; the
/// restart with the lowest inertia wins, ties going to the earliest restart.
/// Points tie-break to the lowest center index; a cluster left empty is
/// reseeded at the point farthest from its assigned center.
/// stats: inertia, iterations, best_restart, and restart_inertia_<r>.
ClusteringResult kmeans_fit(const Matrix& x, const KmeansConfig& cfg);

}  // namespace cluskit
