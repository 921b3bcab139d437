#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cluskit/graph.hpp"
#include "cluskit/metrics.hpp"
#include "cluskit/rcc.hpp"
#include "cluskit/rng.hpp"
#include "support/testdata.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <vector>

using namespace cluskit;
using cluskit::testsupport::make_blobs;
using cluskit::testsupport::TempDir;

namespace {

// Objective trace grouped into fixed-mu phases must be non-increasing inside
// each phase (the two half-steps are exact minimizers there).
void check_descent(const std::vector<ObjectiveSample>& trace) {
    REQUIRE_FALSE(trace.empty());
    for (std::size_t i = 1; i < trace.size(); ++i) {
        if (trace[i].mu != trace[i - 1].mu) continue;  // phase boundary
        const double prev = trace[i - 1].objective;
        const double slack = 1e-9 * std::max(1.0, std::abs(prev));
        CHECK(trace[i].objective <= prev + slack);
    }
}

}  // namespace

TEST_CASE("Geman-McClure penalty values") {
    CHECK(geman_mcclure(2.0, 4.0) == 2.0);        // mu y^2 / (mu + y^2) = 16 / 8
    CHECK(geman_mcclure(0.0, 4.0) == 0.0);
    CHECK(geman_mcclure(1e200, 4.0) == 4.0);      // saturates at mu
    CHECK(geman_mcclure(1.0, 1.0) == 0.5);
}

TEST_CASE("optimal line process closed form") {
    CHECK(optimal_line_process(0.0, 4.0) == 1.0);
    CHECK(optimal_line_process(2.0, 4.0) == 0.25);  // dist^2 = mu -> (1/2)^2
    CHECK(optimal_line_process(1e200, 4.0) > 0.0);  // clamped, never exactly zero
    CHECK(optimal_line_process(1e200, 4.0) <= 1.0);
}

TEST_CASE("line process optimum beats a dense grid") {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 50; ++trial) {
        const double dist = 5.0 * uniform_unit(rng);
        const double mu = 0.01 + 10.0 * uniform_unit(rng);
        const double d2 = dist * dist;
        auto cost = [&](double l) {
            return l * d2 + mu * (std::sqrt(l) - 1.0) * (std::sqrt(l) - 1.0);
        };
        const double best = cost(optimal_line_process(dist, mu));
        for (int g = 1; g <= 200; ++g) {
            CHECK(best <= cost(g / 200.0) + 1e-12);
        }
    }
}

TEST_CASE("lifted objective hand value") {
    // x = u on two 1-D points 0 and 1, one unit-weight edge with l = 1/4,
    // mu = 4, lambda = 2:
    //   0.5 * 0 + (2/2) * (0.25 * 1 + 4 * (0.5 - 1)^2) = 0.25 + 1 = 1.25.
    Matrix x(2, 1);
    x << 0.0, 1.0;
    NeighborGraph g;
    g.n_vertices = 2;
    g.k = 1;
    g.edges = {{0, 1, 1.0}};
    g.degrees = {1, 1};
    CHECK(lifted_objective(x, x, g, {0.25}, 4.0, 2.0) == doctest::Approx(1.25).epsilon(1e-15));
}

TEST_CASE("lifted objective adds the data term") {
    Matrix x(2, 1), u(2, 1);
    x << 0.0, 1.0;
    u << 0.5, 1.0;
    NeighborGraph g;
    g.n_vertices = 2;
    g.k = 1;
    g.edges = {{0, 1, 1.0}};
    g.degrees = {1, 1};
    // 0.5 * 0.25 + (2/2) * (1 * 0.25 + 4 * 0) = 0.125 + 0.25
    CHECK(lifted_objective(x, u, g, {1.0}, 4.0, 2.0) == doctest::Approx(0.375).epsilon(1e-15));
}

TEST_CASE("representative update solves the lifted system") {
    // Two 1-D points 0 and 3 joined by a unit edge, l = 1, lambda = 1:
    // (I + A) U = X with A = [[1,-1],[-1,1]] gives U = (1, 2).
    Matrix x(2, 1);
    x << 0.0, 3.0;
    NeighborGraph g;
    g.n_vertices = 2;
    g.k = 1;
    g.edges = {{0, 1, 1.0}};
    g.degrees = {1, 1};
    Matrix u = update_representatives(x, g, {1.0}, 1.0);
    CHECK(u(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(u(1, 0) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("lambda zero returns x unchanged") {
    std::mt19937_64 rng(7);
    Matrix x = gaussian_matrix(20, 3, rng);
    auto g = assign_edge_weights(mutual_knn_graph(x, 4));
    std::vector<double> line(g.n_edges(), 0.5);
    Matrix u = update_representatives(x, g, line, 0.0);
    CHECK(u == x);
}

TEST_CASE("representative update meets the residual contract") {
    std::mt19937_64 rng(23);
    Matrix x = gaussian_matrix(150, 8, rng);
    auto g = assign_edge_weights(mutual_knn_graph(x, 10));
    std::vector<double> line;
    for (std::size_t e = 0; e < g.n_edges(); ++e) {
        line.push_back(0.01 + 0.99 * uniform_unit(rng));
    }
    const double lambda = 25.0;
    Matrix u = update_representatives(x, g, line, lambda, 1e-6);

    // Recompute (I + lambda A) u directly.
    Matrix lhs = u;
    for (std::size_t e = 0; e < g.n_edges(); ++e) {
        const auto& edge = g.edges[e];
        const auto diff = (u.row(edge.p) - u.row(edge.q)).eval();
        lhs.row(edge.p) += lambda * edge.w * line[e] * diff;
        lhs.row(edge.q) -= lambda * edge.w * line[e] * diff;
    }
    CHECK((lhs - x).norm() / x.norm() <= 1e-6);
}

TEST_CASE("cluster extraction cuts long edges") {
    Matrix u(4, 1);
    u << 0.0, 0.1, 5.0, 5.05;
    NeighborGraph g;
    g.n_vertices = 4;
    g.k = 1;
    g.edges = {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}};
    g.degrees = {1, 2, 2, 1};
    auto result = extract_clusters(u, g, 0.5);
    CHECK(result.n_clusters == 2);
    CHECK(result.labels == std::vector<int>{0, 0, 1, 1});
    CHECK_THROWS_AS(extract_clusters(u, g, 0.0), std::invalid_argument);
}

TEST_CASE("cluster ids are ordered by smallest member vertex") {
    Matrix u(5, 1);
    u << 0.0, 10.0, 0.05, 10.05, 20.0;
    NeighborGraph g;
    g.n_vertices = 5;
    g.k = 1;
    g.edges = {{0, 2, 1.0}, {1, 3, 1.0}};
    g.degrees = {1, 1, 1, 1, 0};
    auto result = extract_clusters(u, g, 0.5);
    CHECK(result.labels == std::vector<int>{0, 1, 0, 1, 2});
}

TEST_CASE("recovers well-separated blobs") {
    auto [x, truth] = make_blobs(40, 6, 3, 60.0, 0.6, 2);
    auto g = assign_edge_weights(mutual_knn_graph(x, 10));
    auto [state, result] = rcc_fit(x, g);
    CHECK(ami(truth, result.labels) >= 0.95);
    CHECK(result.algorithm == "rcc");
    CHECK(state.delta > 0.0);
    CHECK(state.lambda > 0.0);
    for (double l : state.line) {
        CHECK(l > 0.0);
        CHECK(l <= 1.0);
    }
}

TEST_CASE("objective descends within every fixed-mu phase") {
    SUBCASE("blob data") {
        auto [x, truth] = make_blobs(30, 4, 3, 8.0, 0.8, 5);
        auto g = assign_edge_weights(mutual_knn_graph(x, 8));
        auto [state, result] = rcc_fit(x, g);
        check_descent(state.objective_trace);
    }
    SUBCASE("random data") {
        std::mt19937_64 rng(31);
        Matrix x = gaussian_matrix(80, 5, rng);
        auto g = assign_edge_weights(mutual_knn_graph(x, 6));
        auto [state, result] = rcc_fit(x, g);
        check_descent(state.objective_trace);
    }
}

TEST_CASE("mu follows the halving schedule down to its floor") {
    auto [x, truth] = make_blobs(25, 3, 2, 6.0, 0.7, 11);
    auto g = assign_edge_weights(mutual_knn_graph(x, 5));
    RccConfig cfg;
    cfg.inner_iters_per_mu = 2;
    auto [state, result] = rcc_fit(x, g, cfg);
    const auto& trace = state.objective_trace;
    const double floor = 0.5 * state.delta * state.delta;
    for (std::size_t i = 1; i < trace.size(); ++i) {
        const double prev = trace[i - 1].mu;
        const double halved = std::max(prev * 0.5, floor);
        CHECK((trace[i].mu == prev || trace[i].mu == halved));
        CHECK(trace[i].mu >= floor);
    }
    CHECK(state.mu == floor);
}

TEST_CASE("trace starts at iteration zero with the initial objective") {
    auto [x, truth] = make_blobs(15, 2, 2, 5.0, 0.5, 3);
    auto g = assign_edge_weights(mutual_knn_graph(x, 4));
    auto [state, result] = rcc_fit(x, g);
    REQUIRE_FALSE(state.objective_trace.empty());
    CHECK(state.objective_trace.front().iter == 0);
    const double init =
        lifted_objective(x, x, g, std::vector<double>(g.n_edges(), 1.0),
                         state.objective_trace.front().mu, state.lambda);
    CHECK(state.objective_trace.front().objective == init);
}

TEST_CASE("edgeless graph yields singletons") {
    Matrix x(3, 2);
    x << 0, 0, 5, 5, 9, 1;
    NeighborGraph g;
    g.n_vertices = 3;
    g.k = 1;
    g.degrees = {0, 0, 0};
    auto [state, result] = rcc_fit(x, g);
    CHECK(result.n_clusters == 3);
    CHECK(result.labels == std::vector<int>{0, 1, 2});
}

TEST_CASE("fit is deterministic") {
    auto [x, truth] = make_blobs(20, 3, 2, 7.0, 0.6, 29);
    auto g = assign_edge_weights(mutual_knn_graph(x, 5));
    auto [s1, r1] = rcc_fit(x, g);
    auto [s2, r2] = rcc_fit(x, g);
    CHECK(r1.labels == r2.labels);
    CHECK(s1.u == s2.u);
    REQUIRE(s1.objective_trace.size() == s2.objective_trace.size());
    for (std::size_t i = 0; i < s1.objective_trace.size(); ++i) {
        CHECK(s1.objective_trace[i].objective == s2.objective_trace[i].objective);
    }
}

TEST_CASE("stats expose the solved schedule") {
    auto [x, truth] = make_blobs(15, 2, 2, 6.0, 0.5, 41);
    auto g = assign_edge_weights(mutual_knn_graph(x, 4));
    auto [state, result] = rcc_fit(x, g);
    REQUIRE(result.stats.count("iterations") == 1);
    REQUIRE(result.stats.count("objective") == 1);
    REQUIRE(result.stats.count("lambda") == 1);
    REQUIRE(result.stats.count("delta") == 1);
    REQUIRE(result.stats.count("mu_final") == 1);
    CHECK(result.stats.at("lambda") == state.lambda);
    CHECK(result.stats.at("delta") == state.delta);
    CHECK(result.stats.at("mu_final") == state.mu);
    CHECK(result.stats.at("objective") == state.objective_trace.back().objective);
}

TEST_CASE("trace CSV layout") {
    TempDir dir("rcc");
    RccState state;
    state.objective_trace = {{0, 2.0, 10.0}, {1, 2.0, 8.5}, {2, 1.0, 8.25}};
    auto path = dir / "trace.csv";
    write_objective_trace_csv(state, path);
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "iter,mu,objective");
    std::getline(in, line);
    CHECK(line == "0,2,10");
    std::getline(in, line);
    CHECK(line == "1,2,8.5");
    std::getline(in, line);
    CHECK(line == "2,1,8.25");
}

TEST_CASE("configuration bounds are enforced") {
    Matrix x(4, 1);
    x << 0.0, 1.0, 2.0, 3.0;
    auto g = assign_edge_weights(mutual_knn_graph(x, 2));
    RccConfig cfg;
    cfg.max_iters = 0;
    CHECK_THROWS_AS(rcc_fit(x, g, cfg), std::invalid_argument);
    cfg = {};
    cfg.inner_iters_per_mu = 0;
    CHECK_THROWS_AS(rcc_fit(x, g, cfg), std::invalid_argument);
    cfg = {};
    cfg.cluster_cut_factor = 0.0;
    CHECK_THROWS_AS(rcc_fit(x, g, cfg), std::invalid_argument);
}
