#include "hypercut/error.hpp"
#include "hypercut/radial.hpp"
#include "hypercut/spherical.hpp"
#include "hypercut/stats.hpp"
#include "hypercut/walk.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace hypercut;
using namespace hypercut::spectral;

namespace {

std::vector<double> walk_distances(int k, double r1, std::size_t n, std::uint64_t seed) {
    std::vector<double> d(n);
    Rng rng = block_rng(seed, walk::tag_walk, 0);
    for (auto& v : d) {
        geom::PointH z = geom::PointH::i();
        for (int j = 0; j < k; ++j) z = walk::step_discrete(z, r1, rng);
        v = geom::distance(geom::PointH::i(), z);
    }
    return d;
}

} // namespace

TEST_CASE("radial grid bookkeeping") {
    RadialGrid g(0, 2, 4, {0.5, 0.5, 0.5, 0.5});
    CHECK(g.total_mass() == doctest::Approx(1.0));
    CHECK(g.cdf(1.0) == doctest::Approx(0.5));
    CHECK(g.quantile(0.25) == doctest::Approx(0.5));
    CHECK(g.mean() == doctest::Approx(1.0));
    std::ostringstream os;
    g.write_csv(os);
    CHECK(os.str().rfind("r,density\n", 0) == 0);
    RadialGrid h(0, 2, 2, {1.0, 1.0});
    CHECK(h.normalize() == doctest::Approx(1.0));
    CHECK(h.total_mass() == doctest::Approx(1.0));
    CHECK_THROWS_AS(RadialGrid(0, 1, 2, {-1.0, 1.0}, true), Error);
}

TEST_CASE("two-step law matches its closed form") {
    for (double r1 : {0.5, 1.0, 2.0}) {
        auto g = radial_mixture(2, r1);
        CHECK(std::abs(g.total_mass() - 1) < 1e-3);
        for (double r : {0.1 * r1, r1, 1.5 * r1, 1.9 * r1}) CHECK(g.cdf(r) == doctest::Approx(mixture2_cdf(r, r1)).epsilon(2e-3));
        CHECK(mixture2_cdf(0, r1) == 0.0);
        CHECK(mixture2_cdf(2 * r1, r1) == doctest::Approx(1.0));
    }
}

TEST_CASE("one-step kernel CDF is a distribution in the new radius") {
    const double r = 1.3, r1 = 0.7;
    CHECK(step_cdf(std::abs(r - r1) - 1e-9, r, r1) == doctest::Approx(0.0));
    CHECK(step_cdf(r + r1 + 1e-9, r, r1) == doctest::Approx(1.0));
    double prev = 0;
    for (double rho = 0.6; rho <= 2.0; rho += 0.05) {
        double v = step_cdf(rho, r, r1);
        CHECK(v >= prev - 1e-15);
        prev = v;
    }
}

TEST_CASE("three-step law matches Monte-Carlo") {
    auto g = radial_mixture(3, 1.0);
    auto d = walk_distances(3, 1.0, 50000, 11);
    CHECK(stats::ks_one_sample(d, [&](double r) { return g.cdf(r); }) < 0.012);
}

TEST_CASE("mixture convolution is associative") {
    const double h = 0.02;
    auto m2 = radial_mixture(2, 1.0, h);
    auto m4 = radial_mixture(4, 1.0, h);
    auto m22 = convolve(m2, m2, h);
    CHECK(sup_cdf_gap(m4, m22) < 5e-3);
    auto m3 = convolve_step(m2, 1.0, h);
    CHECK(sup_cdf_gap(m3, radial_mixture(3, 1.0, h)) < 1e-9);
}

TEST_CASE("coarse mixture grids are refused") {
    try {
        radial_mixture(3, 1.0, 0.2);
        FAIL("expected a resolution error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::resolution);
    }
}

TEST_CASE("heat kernel is normalized and concentrates around r = t") {
    for (double t : {0.5, 1.0, 5.0}) {
        auto hk = heat_radial_density(t);
        CHECK(std::abs(hk.raw_defect) < 1e-6);
        CHECK(hk.grid.total_mass() == doctest::Approx(1.0));
    }
    auto big = heat_radial_density(20);
    CHECK(big.grid.mean() == doctest::Approx(20).epsilon(0.1));
    CHECK_THROWS_AS(heat_radial_density(1e-4), Error);
}

TEST_CASE("heat kernel has the semigroup property") {
    const double h = 0.02;
    auto a = heat_radial_density(0.5, h).grid;
    auto b = heat_radial_density(1.0, h).grid;
    CHECK(sup_cdf_gap(convolve(a, a, h), b) < 5e-3);
}

TEST_CASE("heat kernel matches the SDE oracle") {
    const double t = 1.0;
    auto hk = heat_radial_density(t);
    std::vector<double> d(4000);
    Rng rng = block_rng(13, walk::tag_sde, 0);
    for (auto& v : d) v = geom::distance(geom::PointH::i(), walk::brownian_sde(geom::PointH::i(), t, 2e-3, rng));
    CHECK(stats::ks_one_sample(d, [&](double r) { return hk.grid.cdf(r); }) < 0.035);
}

TEST_CASE("Brownian sampler reproduces the kernel") {
    walk::BrownianSampler s(2.0);
    Rng rng = block_rng(17, walk::tag_brownian, 0);
    std::vector<double> d(20000);
    for (auto& v : d) v = s.sample_radius(rng);
    CHECK(stats::ks_one_sample(d, [&](double r) { return s.radial().cdf(r); }) < 0.015);
}

TEST_CASE("Helgason transform of the k-step law is the k-th power of phi") {
    auto m3 = radial_mixture(3, 1.0);
    for (double s : {0.0, 0.7, 2.0, 5.0}) {
        double phi = spherical_principal(s, 1.0);
        CHECK(helgason_measure(m3, s) == doctest::Approx(phi * phi * phi).epsilon(1e-3).scale(1e-3));
    }
}

TEST_CASE("Plancherel round trip for a smooth bump") {
    auto bump = [](double r) { return r < 1.5 ? std::pow(1 - r * r / 2.25, 4) : 0.0; };
    auto rep = plancherel_check(bump, 1.5, 40);
    CHECK(rep.ratio == doctest::Approx(1.0).epsilon(0.02));
    CHECK(rep.truncation < 1e-3);
}
