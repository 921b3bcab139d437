#include "cluskit/rcc.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "cluskit/csv.hpp"

namespace cluskit {

namespace {

void check_line(const NeighborGraph& graph, const std::vector<double>& line) {
    if (line.size() != graph.edges.size()) {
        throw std::invalid_argument("line process size does not match edge count");
    }
    for (double l : line) {
        if (!(l > 0.0) || l > 1.0) {
            throw std::invalid_argument("line process value outside (0, 1]");
        }
    }
}

void check_graph(const Matrix& x, const NeighborGraph& graph) {
    if (graph.n_vertices != static_cast<int>(x.rows())) {
        throw std::invalid_argument("graph vertex count does not match matrix rows");
    }
}

// splitmix64, used for reproducible power-iteration start vectors.
std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

Vector start_vector(Eigen::Index n, std::uint64_t& state) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        v(i) = static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53 - 0.5;
    }
    return v;
}

// Largest singular value of x, estimated with 50 power iterations on x^T x.
double spectral_norm(const Matrix& x) {
    std::uint64_t state = 0x8f1bbcdcbfa53e0bull;
    Vector v = start_vector(x.cols(), state);
    for (int it = 0; it < 50; ++it) {
        Vector w = x.transpose() * (x * v);
        const double norm = w.norm();
        if (norm == 0.0) {
            v = start_vector(x.cols(), state);
            continue;
        }
        v = w / norm;
    }
    return (x * v).norm();
}

// Applies the Laplacian with edge weights w_e * l_e to each column of v.
Matrix apply_laplacian(const NeighborGraph& graph, const std::vector<double>& line,
                       const Matrix& v) {
    Matrix out = Matrix::Zero(v.rows(), v.cols());
    for (std::size_t e = 0; e < graph.edges.size(); ++e) {
        const Edge& edge = graph.edges[e];
        const double wl = edge.w * line[e];
        const auto diff = (v.row(edge.p) - v.row(edge.q)).eval();
        out.row(edge.p) += wl * diff;
        out.row(edge.q) -= wl * diff;
    }
    return out;
}

// Largest eigenvalue of the (PSD) Laplacian, 50 power iterations.
double laplacian_norm(const NeighborGraph& graph, const std::vector<double>& line) {
    std::uint64_t state = 0x6c62272e07bb0142ull;
    Vector v = start_vector(graph.n_vertices, state);
    double norm = v.norm();
    if (norm > 0.0) {
        v /= norm;
    }
    for (int it = 0; it < 50; ++it) {
        Vector w = apply_laplacian(graph, line, v);
        norm = w.norm();
        if (norm == 0.0) {
            v = start_vector(graph.n_vertices, state);
            v.normalize();
            continue;
        }
        v = w / norm;
    }
    return apply_laplacian(graph, line, v).norm();
}

Eigen::SparseMatrix<double> build_system(const NeighborGraph& graph,
                                         const std::vector<double>& line, double lambda) {
    const int n = graph.n_vertices;
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(n) + 4 * graph.edges.size());
    for (int i = 0; i < n; ++i) {
        triplets.emplace_back(i, i, 1.0);
    }
    for (std::size_t e = 0; e < graph.edges.size(); ++e) {
        const Edge& edge = graph.edges[e];
        const double v = lambda * edge.w * line[e];
        triplets.emplace_back(edge.p, edge.p, v);
        triplets.emplace_back(edge.q, edge.q, v);
        triplets.emplace_back(edge.p, edge.q, -v);
        triplets.emplace_back(edge.q, edge.p, -v);
    }
    Eigen::SparseMatrix<double> m(n, n);
    m.setFromTriplets(triplets.begin(), triplets.end());
    return m;
}

// Direct solve verified against the requested relative residual, with a few
// rounds of iterative refinement before giving up.
Matrix solve_verified(Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>& solver,
                      const Eigen::SparseMatrix<double>& m, const Matrix& x, double tol) {
    Matrix u = solver.solve(x);
    const double xnorm = std::max(x.norm(), std::numeric_limits<double>::min());
    double rel = (x - m * u).norm() / xnorm;
    for (int round = 0; round < 4 && rel > tol; ++round) {
        u += solver.solve((x - m * u).eval());
        rel = (x - m * u).norm() / xnorm;
    }
    if (rel > tol) {
        throw std::runtime_error("representative solve missed tolerance: residual " +
                                 format_double(rel));
    }
    return u;
}

struct DisjointSet {
    std::vector<int> parent;

    explicit DisjointSet(int n) : parent(static_cast<std::size_t>(n)) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int a) {
        while (parent[static_cast<std::size_t>(a)] != a) {
            parent[static_cast<std::size_t>(a)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
            a = parent[static_cast<std::size_t>(a)];
        }
        return a;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) {
            parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
        }
    }
};

}  // namespace

double geman_mcclure(double y, double mu) {
    if (mu <= 0.0) {
        throw std::invalid_argument("geman_mcclure needs mu > 0");
    }
    const double y2 = y * y;
    if (std::isinf(y2)) {
        return mu;
    }
    return mu * y2 / (mu + y2);
}

double optimal_line_process(double dist, double mu) {
    if (mu <= 0.0) {
        throw std::invalid_argument("optimal_line_process needs mu > 0");
    }
    if (dist < 0.0) {
        throw std::invalid_argument("optimal_line_process needs dist >= 0");
    }
    const double d2 = dist * dist;
    double l = 0.0;
    if (!std::isinf(d2)) {
        const double ratio = mu / (mu + d2);
        l = ratio * ratio;
    }
    return std::max(l, std::numeric_limits<double>::denorm_min());
}

double lifted_objective(const Matrix& x, const Matrix& u, const NeighborGraph& graph,
                        const std::vector<double>& line, double mu, double lambda) {
    check_graph(x, graph);
    check_line(graph, line);
    if (u.rows() != x.rows() || u.cols() != x.cols()) {
        throw std::invalid_argument("representatives shape does not match data");
    }
    if (mu <= 0.0) {
        throw std::invalid_argument("lifted_objective needs mu > 0");
    }

    double value = 0.5 * (x - u).squaredNorm();
    double pairwise = 0.0;
    for (std::size_t e = 0; e < graph.edges.size(); ++e) {
        const Edge& edge = graph.edges[e];
        const double d2 = (u.row(edge.p) - u.row(edge.q)).squaredNorm();
        const double sl = std::sqrt(line[e]) - 1.0;
        pairwise += edge.w * (line[e] * d2 + mu * sl * sl);
    }
    return value + 0.5 * lambda * pairwise;
}

Matrix update_representatives(const Matrix& x, const NeighborGraph& graph,
                              const std::vector<double>& line, double lambda, double tol) {
    check_matrix_finite(x, "update_representatives");
    check_graph(x, graph);
    check_line(graph, line);
    if (lambda < 0.0) {
        throw std::invalid_argument("update_representatives needs lambda >= 0");
    }
    if (lambda == 0.0) {
        return x;
    }
    const Eigen::SparseMatrix<double> m = build_system(graph, line, lambda);
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(m);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("representative system factorization failed");
    }
    return solve_verified(solver, m, x, tol);
}

ClusteringResult extract_clusters(const Matrix& u, const NeighborGraph& graph, double delta) {
    check_matrix_finite(u, "extract_clusters");
    check_graph(u, graph);
    if (!(delta > 0.0)) {
        throw std::invalid_argument("extract_clusters needs delta > 0");
    }

    DisjointSet ds(graph.n_vertices);
    for (const Edge& edge : graph.edges) {
        if ((u.row(edge.p) - u.row(edge.q)).norm() < delta) {
            ds.unite(edge.p, edge.q);
        }
    }

    ClusteringResult result;
    result.algorithm = "graph-components";
    result.labels.assign(static_cast<std::size_t>(graph.n_vertices), -1);
    std::vector<int> root_label(static_cast<std::size_t>(graph.n_vertices), -1);
    int next = 0;
    for (int v = 0; v < graph.n_vertices; ++v) {
        const int root = ds.find(v);
        if (root_label[static_cast<std::size_t>(root)] < 0) {
            root_label[static_cast<std::size_t>(root)] = next++;
        }
        result.labels[static_cast<std::size_t>(v)] = root_label[static_cast<std::size_t>(root)];
    }
    result.n_clusters = next;
    result.stats["n_clusters"] = static_cast<double>(next);
    return result;
}

std::pair<RccState, ClusteringResult> rcc_fit(const Matrix& x, const NeighborGraph& graph,
                                              const RccConfig& cfg) {
    check_matrix_finite(x, "rcc_fit");
    check_graph(x, graph);
    if (cfg.max_iters < 1) {
        throw std::invalid_argument("rcc_fit: max_iters must be >= 1");
    }
    if (cfg.inner_iters_per_mu < 1) {
        throw std::invalid_argument("rcc_fit: inner_iters_per_mu must be >= 1");
    }
    if (!(cfg.linear_solver_tolerance > 0.0)) {
        throw std::invalid_argument("rcc_fit: linear_solver_tolerance must be > 0");
    }
    if (!(cfg.cluster_cut_factor > 0.0)) {
        throw std::invalid_argument("rcc_fit: cluster_cut_factor must be > 0");
    }

    RccState state;
    if (graph.edges.empty()) {
        std::cerr << "rcc_fit: graph has no edges; every sample becomes a singleton cluster\n";
        state.u = x;
        ClusteringResult result;
        result.algorithm = "rcc";
        result.n_clusters = static_cast<int>(x.rows());
        result.labels.resize(static_cast<std::size_t>(x.rows()));
        std::iota(result.labels.begin(), result.labels.end(), 0);
        result.stats["n_clusters"] = static_cast<double>(result.n_clusters);
        result.stats["iterations"] = 0.0;
        return {std::move(state), std::move(result)};
    }

    const std::size_t n_edges = graph.edges.size();
    std::vector<double> edge_len(n_edges, 0.0);
    double max_len2 = 0.0;
    std::vector<double> nearest(static_cast<std::size_t>(graph.n_vertices),
                                std::numeric_limits<double>::infinity());
    for (std::size_t e = 0; e < n_edges; ++e) {
        const Edge& edge = graph.edges[e];
        const double len = (x.row(edge.p) - x.row(edge.q)).norm();
        edge_len[e] = len;
        max_len2 = std::max(max_len2, len * len);
        nearest[static_cast<std::size_t>(edge.p)] =
            std::min(nearest[static_cast<std::size_t>(edge.p)], len);
        nearest[static_cast<std::size_t>(edge.q)] =
            std::min(nearest[static_cast<std::size_t>(edge.q)], len);
    }
    double nn_sum = 0.0;
    int nn_count = 0;
    for (double d : nearest) {
        if (std::isfinite(d)) {
            nn_sum += d;
            ++nn_count;
        }
    }
    state.delta = cfg.cluster_cut_factor * (nn_sum / static_cast<double>(nn_count));
    const double delta_cut =
        state.delta > 0.0 ? state.delta : std::numeric_limits<double>::min();
    const double mu_floor = 0.5 * state.delta * state.delta;

    state.lambda = 0.0;
    const double x_norm = spectral_norm(x);
    const std::vector<double> ones(n_edges, 1.0);
    const double a_norm = laplacian_norm(graph, ones);
    if (x_norm > 0.0 && a_norm > 0.0) {
        state.lambda = x_norm / a_norm;
    } else if (a_norm > 0.0) {
        state.lambda = 1.0;
    }

    state.mu = max_len2 > 0.0 ? 3.0 * max_len2 : 1.0;
    bool at_floor = false;
    if (state.mu <= mu_floor) {
        state.mu = mu_floor;
        at_floor = true;
    }

    state.u = x;
    state.line.assign(n_edges, 1.0);
    state.objective_trace.push_back(
        {0, state.mu, lifted_objective(x, state.u, graph, state.line, state.mu, state.lambda)});

    Eigen::SparseMatrix<double> m = build_system(graph, state.line, state.lambda);
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
    solver.analyzePattern(m);

    double prev_obj = state.objective_trace.front().objective;
    double prev_mu = state.mu;
    int inner = 0;
    for (int iter = 1; iter <= cfg.max_iters; ++iter) {
        for (std::size_t e = 0; e < n_edges; ++e) {
            const Edge& edge = graph.edges[e];
            const double dist = (state.u.row(edge.p) - state.u.row(edge.q)).norm();
            state.line[e] = optimal_line_process(dist, state.mu);
        }

        if (state.lambda > 0.0) {
            m = build_system(graph, state.line, state.lambda);
            solver.factorize(m);
            if (solver.info() != Eigen::Success) {
                throw std::runtime_error("representative system factorization failed");
            }
            state.u = solve_verified(solver, m, x, cfg.linear_solver_tolerance);
        } else {
            state.u = x;
        }

        const double obj =
            lifted_objective(x, state.u, graph, state.line, state.mu, state.lambda);
        state.objective_trace.push_back({iter, state.mu, obj});
        state.iterations = iter;

        const double rel = std::abs(obj - prev_obj) / std::max(std::abs(prev_obj), 1e-12);
        const bool same_phase = prev_mu == state.mu;
        prev_obj = obj;
        prev_mu = state.mu;
        if (at_floor && same_phase && rel < 1e-7) {
            break;
        }

        if (!at_floor && ++inner >= cfg.inner_iters_per_mu) {
            inner = 0;
            state.mu *= 0.5;
            if (state.mu <= mu_floor) {
                state.mu = mu_floor;
                at_floor = true;
            }
        }
    }

    ClusteringResult result = extract_clusters(state.u, graph, delta_cut);
    result.algorithm = "rcc";
    result.stats["iterations"] = static_cast<double>(state.iterations);
    result.stats["objective"] = prev_obj;
    result.stats["lambda"] = state.lambda;
    result.stats["delta"] = state.delta;
    result.stats["mu_final"] = state.mu;
    return {std::move(state), std::move(result)};
}

void write_objective_trace_csv(const RccState& state, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open for writing: " + path.string());
    }
    out << "iter,mu,objective\n";
    for (const ObjectiveSample& s : state.objective_trace) {
        out << s.iter << ',' << format_double(s.mu) << ',' << format_double(s.objective) << '\n';
    }
    out.flush();
    if (!out) {
        throw std::runtime_error("write failed: " + path.string());
    }
}

}  // namespace cluskit
