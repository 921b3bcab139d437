#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cluskit/rng.hpp"
#include "cluskit/tsne.hpp"
#include "support/testdata.hpp"

#include <cmath>
#include <random>

using namespace cluskit;
using cluskit::testsupport::make_blobs;

TEST_CASE("perplexity bisection hits the target entropy") {
    std::mt19937_64 rng(3);
    for (double target : {2.0, 5.0, 12.0}) {
        Vector d2(19);
        for (int i = 0; i < 19; ++i) d2(i) = 0.1 + 4.0 * uniform_unit(rng);
        auto res = perplexity_search(d2, target);
        REQUIRE(res.sigma > 0.0);
        REQUIRE(res.conditional.size() == 19);
        CHECK(res.conditional.sum() == doctest::Approx(1.0).epsilon(1e-12));
        double entropy_bits = 0.0;
        for (int i = 0; i < 19; ++i) {
            if (res.conditional(i) > 0.0) {
                entropy_bits -= res.conditional(i) * std::log2(res.conditional(i));
            }
        }
        CHECK(std::abs(entropy_bits - std::log2(target)) < 1e-5);
    }
}

TEST_CASE("conditional weights decay with distance") {
    Vector d2(4);
    d2 << 0.1, 0.5, 2.0, 8.0;
    auto res = perplexity_search(d2, 2.0);
    for (int i = 1; i < 4; ++i) {
        CHECK(res.conditional(i) < res.conditional(i - 1));
    }
}

TEST_CASE("all-zero distances fall back to the uniform row") {
    Vector d2 = Vector::Zero(5);
    auto res = perplexity_search(d2, 3.0);
    for (int i = 0; i < 5; ++i) {
        CHECK(res.conditional(i) == doctest::Approx(0.2).epsilon(1e-15));
    }
}

TEST_CASE("affinities are symmetric, floored, and sum to one") {
    auto [x, truth] = make_blobs(8, 3, 2, 4.0, 0.5, 9);
    Matrix p = build_affinities(x, 5.0);
    REQUIRE(p.rows() == 16);
    REQUIRE(p.cols() == 16);
    CHECK(p.sum() == doctest::Approx(1.0).epsilon(1e-12));
    for (Eigen::Index i = 0; i < 16; ++i) {
        CHECK(p(i, i) == 0.0);
        for (Eigen::Index j = 0; j < 16; ++j) {
            if (i == j) continue;
            CHECK(p(i, j) == p(j, i));
            CHECK(p(i, j) > 0.0);
        }
    }
}

TEST_CASE("affinity construction validates its inputs") {
    Matrix tiny(2, 2);
    tiny.setZero();
    CHECK_THROWS_AS(build_affinities(tiny, 1.0), std::invalid_argument);
    Matrix x(5, 2);
    x.setRandom();
    CHECK_THROWS_AS(build_affinities(x, 5.0), std::invalid_argument);  // perplexity >= N
    CHECK_THROWS_AS(build_affinities(x, 0.0), std::invalid_argument);
}

TEST_CASE("low-dimensional affinities form a Student-t distribution") {
    std::mt19937_64 rng(17);
    Matrix y = gaussian_matrix(10, 2, rng);
    Matrix q = low_dim_affinities(y);
    CHECK(q.sum() == doctest::Approx(1.0).epsilon(1e-12));
    for (Eigen::Index i = 0; i < 10; ++i) {
        CHECK(q(i, i) == 0.0);
    }
    // The pair with the smallest embedded distance carries the largest q.
    Eigen::Index bi = 0, bj = 1;
    double best = -1.0;
    for (Eigen::Index i = 0; i < 10; ++i) {
        for (Eigen::Index j = 0; j < 10; ++j) {
            if (i != j && q(i, j) > best) {
                best = q(i, j);
                bi = i;
                bj = j;
            }
        }
    }
    double dmin = 1e300;
    Eigen::Index mi = 0, mj = 1;
    for (Eigen::Index i = 0; i < 10; ++i) {
        for (Eigen::Index j = 0; j < 10; ++j) {
            if (i != j && (y.row(i) - y.row(j)).squaredNorm() < dmin) {
                dmin = (y.row(i) - y.row(j)).squaredNorm();
                mi = i;
                mj = j;
            }
        }
    }
    CHECK(bi == mi);
    CHECK(bj == mj);
}

TEST_CASE("KL divergence is zero for identical distributions") {
    std::mt19937_64 rng(21);
    Matrix y = gaussian_matrix(8, 2, rng);
    Matrix q = low_dim_affinities(y);
    CHECK(kl_divergence(q, q) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
}

TEST_CASE("KL divergence rejects zero q under positive p") {
    Matrix p = Matrix::Zero(3, 3);
    p(0, 1) = p(1, 0) = 0.5;
    Matrix q = Matrix::Zero(3, 3);
    q(0, 2) = q(2, 0) = 0.5;
    CHECK_THROWS_AS(kl_divergence(p, q), std::invalid_argument);
}

TEST_CASE("analytic gradient matches central differences") {
    auto [x, truth] = make_blobs(6, 4, 2, 3.0, 0.6, 33);
    Matrix p = build_affinities(x, 4.0);
    std::mt19937_64 rng(5);
    Matrix y = gaussian_matrix(12, 2, rng);
    Matrix grad = tsne_gradient(p, y);

    const double h = 1e-5;
    double max_rel = 0.0;
    for (Eigen::Index i = 0; i < y.rows(); ++i) {
        for (Eigen::Index d = 0; d < 2; ++d) {
            Matrix yp = y, ym = y;
            yp(i, d) += h;
            ym(i, d) -= h;
            const double fp = kl_divergence(p, low_dim_affinities(yp));
            const double fm = kl_divergence(p, low_dim_affinities(ym));
            const double numeric = (fp - fm) / (2.0 * h);
            const double rel = std::abs(grad(i, d) - numeric) /
                               std::max(1e-8, std::abs(numeric));
            max_rel = std::max(max_rel, rel);
        }
    }
    CHECK(max_rel <= 1e-4);
}

TEST_CASE("embedding runs deterministically and is centered") {
    auto [x, truth] = make_blobs(10, 5, 2, 6.0, 0.5, 13);
    TsneConfig cfg;
    cfg.perplexity = 5.0;
    cfg.n_iters = 60;
    cfg.exaggeration_iters = 20;
    cfg.seed = 7;
    auto a = tsne_embed(x, cfg);
    auto b = tsne_embed(x, cfg);
    REQUIRE(a.embedding.rows() == 20);
    REQUIRE(a.embedding.cols() == 2);
    CHECK(a.embedding == b.embedding);
    CHECK(a.kl_trace == b.kl_trace);
    CHECK(a.embedding.colwise().mean().cwiseAbs().maxCoeff() <= 1e-12);
    REQUIRE(a.kl_trace.size() == 60);
    CHECK(a.final_kl == a.kl_trace.back());
    for (double kl : a.kl_trace) {
        CHECK(std::isfinite(kl));
        CHECK(kl >= 0.0);
    }
}

TEST_CASE("longer optimization does not worsen the true KL") {
    auto [x, truth] = make_blobs(12, 4, 3, 8.0, 0.5, 19);
    TsneConfig short_run;
    short_run.perplexity = 8.0;
    short_run.n_iters = 30;
    short_run.exaggeration_iters = 10;
    short_run.seed = 3;
    TsneConfig long_run = short_run;
    long_run.n_iters = 300;
    const double kl_short = tsne_embed(x, short_run).final_kl;
    const double kl_long = tsne_embed(x, long_run).final_kl;
    CHECK(kl_long <= kl_short + 1e-9);
}

TEST_CASE("separated blobs separate in the embedding") {
    auto [x, truth] = make_blobs(15, 6, 2, 50.0, 0.5, 23);
    TsneConfig cfg;
    cfg.perplexity = 10.0;
    cfg.n_iters = 400;
    cfg.seed = 1;
    auto res = tsne_embed(x, cfg);
    // Every within-class pair of class 0 should embed closer to its class
    // centroid than to the other class's centroid.
    Eigen::RowVector2d c0 = Eigen::RowVector2d::Zero();
    Eigen::RowVector2d c1 = Eigen::RowVector2d::Zero();
    for (int i = 0; i < 15; ++i) c0 += res.embedding.row(i);
    for (int i = 15; i < 30; ++i) c1 += res.embedding.row(i);
    c0 /= 15.0;
    c1 /= 15.0;
    int correct = 0;
    for (int i = 0; i < 30; ++i) {
        const double d0 = (res.embedding.row(i) - c0).squaredNorm();
        const double d1 = (res.embedding.row(i) - c1).squaredNorm();
        const bool to_c0 = d0 < d1;
        if (to_c0 == (truth[static_cast<std::size_t>(i)] == 0)) ++correct;
    }
    CHECK(correct == 30);
}

TEST_CASE("config validation") {
    auto [x, truth] = make_blobs(5, 3, 2, 4.0, 0.5, 3);
    TsneConfig cfg;
    cfg.n_iters = 0;
    CHECK_THROWS_AS(tsne_embed(x, cfg), std::invalid_argument);
    cfg = {};
    cfg.learning_rate = 0.0;
    CHECK_THROWS_AS(tsne_embed(x, cfg), std::invalid_argument);
    cfg = {};
    cfg.perplexity = 10.0;  // >= N
    CHECK_THROWS_AS(tsne_embed(x, cfg), std::invalid_argument);
}
