#pragma once

#include "cluskit/graph.hpp"
#include "cluskit/types.hpp"

#include <filesystem>
#include <utility>
#include <vector>

namespace cluskit {

struct RccConfig {
    int max_iters = 100;
    int inner_iters_per_mu = 4;        ///< iterations between halvings of mu
    double linear_solver_tolerance = 1e-6;
    double cluster_cut_factor = 1.0;   ///< scales the cluster-cut threshold delta
};

struct ObjectiveSample {
    int iter = 0;
    double mu = 0.0;
    double objective = 0.0;
};

/// Solver state of a robust continuous clustering run.
struct RccState {
    Matrix u;                  ///< N x D representatives
    std::vector<double> line;  ///< per-edge line-process value in (0, 1]
    double mu = 0.0;
    double lambda = 0.0;
    double delta = 0.0;        ///< cluster-cut distance threshold
    int iterations = 0;
    std::vector<ObjectiveSample> objective_trace;
};

/// Scaled Geman-McClure penalty mu * y^2 / (mu + y^2).
double geman_mcclure(double y, double mu);

/// Closed-form minimizer of the line process for an edge of the given
/// length: (mu / (mu + dist^2))^2, clamped to stay positive.
double optimal_line_process(double dist, double mu);

/// Value of the lifted objective
///   0.5 * ||X - U||_F^2
///   + (lambda / 2) * sum_e w_e * (l_e * ||u_p - u_q||^2 + mu * (sqrt(l_e) - 1)^2).
double lifted_objective(const Matrix& x, const Matrix& u, const NeighborGraph& graph,
                        const std::vector<double>& line, double mu, double lambda);

/// Exact U-step: solves (I + lambda * A) U = X where A is the graph Laplacian
/// with edge weights w_e * l_e. The solve is verified to a relative residual
/// of tol (iterative refinement if needed) or throws std::runtime_error.
/// lambda = 0 returns X unchanged.
Matrix update_representatives(const Matrix& x, const NeighborGraph& graph,
                              const std::vector<double>& line, double lambda, double tol = 1e-6);

/// Connected components of the graph restricted to edges with
/// ||u_p - u_q|| < delta. Cluster ids are compact, ordered by each
/// component's smallest vertex. Requires delta > 0.
ClusteringResult extract_clusters(const Matrix& u, const NeighborGraph& graph, double delta);

/// Full alternating solve with a graduated non-convexity schedule: mu starts
/// at 3 * max edge length^2, halves every inner_iters_per_mu iterations, and
/// floors at delta^2 / 2. Stops at max_iters or when the relative objective
/// change drops below 1e-7 at the final mu. delta is cluster_cut_factor times
/// the mean distance of a vertex to its nearest graph neighbor.
/// A graph without edges yields singleton clusters and a warning on stderr.
std::pair<RccState, ClusteringResult> rcc_fit(const Matrix& x, const NeighborGraph& graph,
                                              const RccConfig& cfg = {});

/// Writes trace rows "iter,mu,objective" with a header.
void write_objective_trace_csv(const RccState& state, const std::filesystem::path& path);

}  // namespace cluskit
