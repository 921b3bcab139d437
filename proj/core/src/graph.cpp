#include "cluskit/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "cluskit/csv.hpp"
#include "cluskit/distance.hpp"

namespace cluskit {

NeighborGraph mutual_knn_graph(const Matrix& x, int k) {
    check_matrix_finite(x, "mutual_knn_graph");
    const int n = static_cast<int>(x.rows());
    if (n < 2) {
        throw std::invalid_argument("mutual_knn_graph needs at least 2 rows");
    }
    if (k < 1 || k > n - 1) {
        throw std::invalid_argument("mutual_knn_graph: k must be in [1, N-1], got " +
                                    std::to_string(k));
    }

    const Matrix d2 = pairwise_sq_dists(x);

    // neighbor_sets[p] holds p's k nearest row indices, sorted ascending for
    // the mutuality lookup below.
    std::vector<std::vector<int>> neighbor_sets(static_cast<std::size_t>(n));
    std::vector<std::pair<double, int>> order(static_cast<std::size_t>(n - 1));
    for (int p = 0; p < n; ++p) {
        std::size_t m = 0;
        for (int q = 0; q < n; ++q) {
            if (q != p) {
                order[m++] = {d2(p, q), q};
            }
        }
        std::partial_sort(order.begin(), order.begin() + k, order.end());
        auto& set = neighbor_sets[static_cast<std::size_t>(p)];
        set.resize(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) {
            set[static_cast<std::size_t>(i)] = order[static_cast<std::size_t>(i)].second;
        }
        std::sort(set.begin(), set.end());
    }

    NeighborGraph graph;
    graph.n_vertices = n;
    graph.k = k;
    graph.degrees.assign(static_cast<std::size_t>(n), 0);
    for (int p = 0; p < n; ++p) {
        for (int q : neighbor_sets[static_cast<std::size_t>(p)]) {
            if (q <= p) {
                continue;
            }
            const auto& back = neighbor_sets[static_cast<std::size_t>(q)];
            if (std::binary_search(back.begin(), back.end(), p)) {
                graph.edges.push_back({p, q, 1.0});
                ++graph.degrees[static_cast<std::size_t>(p)];
                ++graph.degrees[static_cast<std::size_t>(q)];
            }
        }
    }
    return graph;
}

NeighborGraph assign_edge_weights(NeighborGraph graph, EdgeWeighting weighting) {
    if (graph.edges.empty()) {
        throw std::invalid_argument("assign_edge_weights: graph has no edges");
    }
    const double n = static_cast<double>(graph.n_vertices);
    const double n_edges = static_cast<double>(graph.edges.size());
    for (Edge& e : graph.edges) {
        if (weighting == EdgeWeighting::uniform) {
            e.w = 1.0 / n_edges;
        } else {
            const double dp = static_cast<double>(graph.degrees[static_cast<std::size_t>(e.p)]);
            const double dq = static_cast<double>(graph.degrees[static_cast<std::size_t>(e.q)]);
            e.w = n / (n_edges * std::sqrt(dp * dq));
        }
    }
    return graph;
}

void write_edge_list_csv(const NeighborGraph& graph, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open for writing: " + path.string());
    }
    out << "p,q,w\n";
    for (const Edge& e : graph.edges) {
        out << e.p << ',' << e.q << ',' << format_double(e.w) << '\n';
    }
    out.flush();
    if (!out) {
        throw std::runtime_error("write failed: " + path.string());
    }
}

}  // namespace cluskit
