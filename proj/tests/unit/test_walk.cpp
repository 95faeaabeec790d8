#include "hypercut/error.hpp"
#include "hypercut/walk.hpp"

#include <doctest.h>

#include <cmath>

using namespace hypercut;
using namespace hypercut::walk;

TEST_CASE("discrete steps have exact length") {
    Rng rng = block_rng(1, tag_walk, 0);
    for (auto z : {geom::PointH(0.2, 0.7), geom::PointH(-3.0, 1e-3), geom::PointH(40.0, 25.0)})
        for (int i = 0; i < 200; ++i) CHECK(geom::distance(z, step_discrete(z, 0.8, rng)) == doctest::Approx(0.8).epsilon(1e-9));
}

TEST_CASE("walk ensembles respect the support bound and are deterministic") {
    WalkConfig cfg;
    cfg.r1 = 0.5;
    cfg.k = 12;
    cfg.n_walkers = 5000;
    cfg.seed = 99;
    cfg.trajectory_walkers = 3;
    auto a = walk_discrete(cfg);
    cfg.workers = 3;
    auto b = walk_discrete(cfg);
    CHECK(a.support_violations == 0);
    CHECK(a.log_y == b.log_y);
    CHECK(a.dist == b.dist);
    CHECK(a.per_step.size() == 13);
    CHECK(a.trajectories.size() == 3 * 13);
    for (double d : a.dist) CHECK(d <= 12 * 0.5 + 1e-9);
}

TEST_CASE("CLT check reports insufficient data") {
    WalkConfig cfg;
    cfg.k = 10;
    cfg.n_walkers = 100;
    auto rep = clt_check(walk_discrete(cfg), 1.0);
    CHECK(rep.skipped);
    CHECK_FALSE(rep.notice.empty());
}

TEST_CASE("CLT drift and variance at moderate size") {
    WalkConfig cfg;
    cfg.r1 = 1.0;
    cfg.k = 60;
    cfg.n_walkers = 20000;
    cfg.seed = 5;
    auto rep = clt_check(walk_discrete(cfg), 1.0);
    REQUIRE_FALSE(rep.skipped);
    CHECK(rep.drift_ok);
    CHECK(rep.variance_rel_error < 0.08);
}

TEST_CASE("tail checks: log y family decays like a Gaussian") {
    WalkConfig cfg;
    cfg.r1 = 1.0;
    cfg.k = 40;
    cfg.n_walkers = 20000;
    cfg.seed = 6;
    auto rep = tail_checks(walk_discrete(cfg), 1.0, {0.5, 1.0, 1.5, 2.0, 2.5});
    REQUIRE(rep.families.size() == 3);
    CHECK(rep.families[0].name == "log_y");
    CHECK(rep.families[0].slope < 0);
    CHECK(rep.families[0].r2 >= 0.9);
    CHECK_THROWS_AS(tail_checks(walk_discrete(cfg), 0.01, {1.0}), Error);
}

TEST_CASE("Brownian jumps follow the heat kernel radius") {
    BrownianSampler s(1.0);
    Rng rng = block_rng(2, tag_brownian, 0);
    double mean = 0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) mean += geom::distance(geom::PointH::i(), brownian_jump(geom::PointH::i(), s, rng));
    CHECK(mean / n == doctest::Approx(s.radial().mean()).epsilon(0.02));
}
