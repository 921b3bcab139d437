#include <benchmark/benchmark.h>

#include "cluskit/graph.hpp"
#include "cluskit/kmeans.hpp"
#include "cluskit/metrics.hpp"
#include "cluskit/pca.hpp"
#include "cluskit/rcc.hpp"
#include "cluskit/rng.hpp"
#include "cluskit/tsne.hpp"

#include <random>
#include <vector>

using namespace cluskit;

namespace {

Matrix random_points(int n, int d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return gaussian_matrix(n, d, rng);
}

}  // namespace

static void MutualKnnGraph(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Matrix x = random_points(n, 16, 1);
    for (auto _ : state) {
        auto g = mutual_knn_graph(x, 10);
        benchmark::DoNotOptimize(g.edges.data());
    }
    state.SetComplexityN(n);
}
BENCHMARK(MutualKnnGraph)->RangeMultiplier(2)->Range(128, 2048)->Complexity();

static void RepresentativeSolve(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Matrix x = random_points(n, 16, 2);
    auto g = assign_edge_weights(mutual_knn_graph(x, 10));
    std::mt19937_64 rng(3);
    std::vector<double> line;
    line.reserve(g.n_edges());
    for (std::size_t e = 0; e < g.n_edges(); ++e) {
        line.push_back(0.05 + 0.95 * uniform_unit(rng));
    }
    for (auto _ : state) {
        Matrix u = update_representatives(x, g, line, 20.0);
        benchmark::DoNotOptimize(u.data());
    }
    state.SetComplexityN(n);
}
BENCHMARK(RepresentativeSolve)->RangeMultiplier(2)->Range(128, 2048)->Complexity();

static void RccFit(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Matrix x = random_points(n, 8, 4);
    auto g = assign_edge_weights(mutual_knn_graph(x, 10));
    for (auto _ : state) {
        auto [s, result] = rcc_fit(x, g);
        benchmark::DoNotOptimize(result.labels.data());
    }
    state.SetComplexityN(n);
}
BENCHMARK(RccFit)->RangeMultiplier(2)->Range(128, 512)->Complexity();

static void TsneAffinities(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Matrix x = random_points(n, 16, 5);
    for (auto _ : state) {
        Matrix p = build_affinities(x, 30.0);
        benchmark::DoNotOptimize(p.data());
    }
    state.SetComplexityN(n);
}
BENCHMARK(TsneAffinities)->RangeMultiplier(2)->Range(128, 1024)->Complexity();

static void KmeansFit(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Matrix x = random_points(n, 16, 6);
    KmeansConfig cfg;
    cfg.k = 8;
    cfg.n_init = 3;
    for (auto _ : state) {
        auto result = kmeans_fit(x, cfg);
        benchmark::DoNotOptimize(result.labels.data());
    }
    state.SetComplexityN(n);
}
BENCHMARK(KmeansFit)->RangeMultiplier(2)->Range(256, 2048)->Complexity();

static void PcaFit(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Matrix x = random_points(n, 64, 7);
    for (auto _ : state) {
        PcaModel model = pca_fit(x, 16);
        benchmark::DoNotOptimize(model.components.data());
    }
    state.SetComplexityN(n);
}
BENCHMARK(PcaFit)->RangeMultiplier(2)->Range(256, 2048)->Complexity();

static void AmiScore(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    std::mt19937_64 rng(8);
    std::vector<int> a(static_cast<std::size_t>(n)), b(static_cast<std::size_t>(n));
    for (auto& v : a) v = static_cast<int>(uniform_index(rng, 12));
    for (auto& v : b) v = static_cast<int>(uniform_index(rng, 12));
    for (auto _ : state) {
        benchmark::DoNotOptimize(ami(a, b));
    }
    state.SetComplexityN(n);
}
BENCHMARK(AmiScore)->RangeMultiplier(4)->Range(1024, 65536)->Complexity();

int main(int argc, char** argv) {
    benchmark::Initialize(&argc, argv);
    if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
    benchmark::RunSpecifiedBenchmarks();
    return 0;
}
