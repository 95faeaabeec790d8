#include "hypercut/error.hpp"
#include "hypercut/torus.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <doctest.h>

#include <cmath>

using namespace hypercut::torus;

TEST_CASE("theta and Fourier series agree") {
    for (double lambda : {0.5, 1.0, 10.0})
        for (double ratio : {0.05, 0.5, 2.0}) {
            TorusConfig cfg{lambda, ratio * lambda};
            for (double x : {0.0, 0.1, 0.27, 0.5}) {
                auto d = torus_density(cfg, x);
                CHECK(d.theta == doctest::Approx(d.fourier).epsilon(1e-10));
                CHECK(torus_density(cfg, -x).fourier == doctest::Approx(d.fourier).epsilon(1e-12));
                CHECK(torus_density(cfg, 1 - x).theta == doctest::Approx(d.theta).epsilon(1e-12));
            }
        }
    CHECK(torus_density({1.0, 40.0}, 0.3).fourier == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(theta_variance({2.0, 1.0}) == doctest::Approx(1.0 / (4 * M_PI * M_PI)));
}

TEST_CASE("L1 distance matches the crossing series") {
    for (double lambda : {1.0, 10.0})
        for (double ratio : {0.1, 0.5, 1.0, 3.0}) {
            TorusConfig cfg{lambda, ratio * lambda};
            auto r = torus_l1(cfg);
            CHECK(r.root > 0);
            CHECK(r.root < 0.5);
            CHECK(torus_excess(cfg, r.root) == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));
            CHECK(r.l1 == doctest::Approx(torus_l1_series(cfg, r.root)).epsilon(1e-9));
            auto ex = [&](double x) { return std::abs(torus_density(cfg, x).fourier - 1); };
            using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
            double quad = 2 * (GK::integrate(ex, 0.0, r.root, 15, 1e-13) + GK::integrate(ex, r.root, 0.5, 15, 1e-13));
            CHECK(r.l1 == doctest::Approx(quad).epsilon(1e-9));
            CHECK(r.l1 <= r.l2 + 1e-12);
            CHECK(r.lower_margin > 0);
            CHECK(r.upper_margin > 0);
        }
}

TEST_CASE("L1 distance decays monotonically and scales with lambda") {
    double prev = 2;
    for (double t = 0.01; t < 5; t *= 1.5) {
        double l1 = torus_l1({1.0, t}).l1;
        CHECK(l1 < prev);
        prev = l1;
    }
    CHECK(torus_l1({1.0, 1e-3}).l1 == doctest::Approx(2.0).epsilon(0.05));
    CHECK(torus_l1({1.0, 1e-8}).l1 == doctest::Approx(2.0).epsilon(1e-3));
    for (double t : {0.3, 1.0, 2.5})
        CHECK(torus_l1({2.0, 2 * t}).l1 == doctest::Approx(torus_l1({1.0, t}).l1).epsilon(1e-10));
    CHECK(torus_l1({1.0, 1.0}).l1 < torus_l1({2.0, 1.0}).l1);
}

TEST_CASE("no-cutoff ratios stay bounded") {
    auto prof = no_cutoff_profile({1, 10, 100}, {1, 2, 4, 8});
    CHECK(prof.rows.size() == 12);
    for (const auto& row : prof.rows) {
        CHECK(row.ratio * row.T >= row.bracket_lo - 1e-9);
        CHECK(row.ratio * row.T <= row.bracket_hi + 1e-9);
        CHECK(torus_l1({row.lambda, row.t}).l1 == doctest::Approx(std::exp(-row.T)).epsilon(1e-6));
    }
    CHECK(prof.spread <= 3);
}

TEST_CASE("torus inputs are validated") {
    CHECK_THROWS_AS(torus_l1({0.0, 1.0}), hypercut::Error);
    CHECK_THROWS_AS(torus_l1({1.0, -1.0}), hypercut::Error);
}
