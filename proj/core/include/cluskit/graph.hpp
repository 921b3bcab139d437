#pragma once

#include "cluskit/types.hpp"

#include <filesystem>
#include <vector>

namespace cluskit {

/// How mutual-kNN edge weights are assigned.
enum class EdgeWeighting { degree_balanced, uniform };

/// Undirected weighted edge with p < q.
struct Edge {
    int p = 0;
    int q = 0;
    double w = 1.0;
};

/// Undirected graph from mutual k-nearest-neighbor selection.
struct NeighborGraph {
    int n_vertices = 0;
    int k = 0;                ///< neighbor count the graph was built with
    std::vector<Edge> edges;  ///< sorted by (p, q), no duplicates
    std::vector<int> degrees; ///< incident edge count per vertex

    std::size_t n_edges() const { return edges.size(); }
};

/// Connects p and q when each is among the other's k nearest rows by
/// Euclidean distance. Distance ties rank the smaller row index first.
/// Requires N >= 2 and 1 <= k <= N-1. Edges start with weight 1.
NeighborGraph mutual_knn_graph(const Matrix& x, int k);

/// Assigns edge weights. degree_balanced uses N / (|E| * sqrt(deg_p * deg_q))
/// with degrees taken from the mutual graph; uniform uses 1 / |E|.
/// Requires at least one edge.
NeighborGraph assign_edge_weights(NeighborGraph graph,
                                  EdgeWeighting weighting = EdgeWeighting::degree_balanced);

/// Writes rows "p,q,w" with a header, edges in (p, q) order.
void write_edge_list_csv(const NeighborGraph& graph, const std::filesystem::path& path);

}  // namespace cluskit
