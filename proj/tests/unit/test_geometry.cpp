#include "hypercut/error.hpp"
#include "hypercut/geometry.hpp"
#include "hypercut/parallel.hpp"

#include <doctest.h>

#include <cmath>

using namespace hypercut;
using namespace hypercut::geom;

TEST_CASE("distance matches the cosh formula and is a metric") {
    Rng rng = block_rng(7, 1, 0);
    std::uniform_real_distribution<double> X(-3, 3), Y(0.05, 4);
    for (int i = 0; i < 500; ++i) {
        PointH a(X(rng), Y(rng)), b(X(rng), Y(rng)), c(X(rng), Y(rng));
        double dx = a.x() - b.x(), dy = a.y() - b.y();
        double oracle = std::acosh(1 + (dx * dx + dy * dy) / (2 * a.y() * b.y()));
        CHECK(distance(a, b) == doctest::Approx(oracle).epsilon(1e-10));
        CHECK(distance(a, b) == doctest::Approx(distance(b, a)).epsilon(1e-14));
        CHECK(distance(a, c) <= distance(a, b) + distance(b, c) + 1e-12);
    }
    CHECK(distance(PointH::i(), PointH::i()) == 0.0);
    CHECK(distance(PointH(0, 1), PointH(0, std::exp(2.0))) == doctest::Approx(2.0));
}

TEST_CASE("points validate their imaginary part") {
    CHECK_THROWS_AS(PointH(0, 0), Error);
    CHECK_THROWS_AS(PointH(0, -1), Error);
    CHECK_THROWS_AS(PointH(NAN, 1), Error);
    CHECK_THROWS_AS(MobiusReal(1, 0, 0, -1), Error);
}

TEST_CASE("Mobius maps are isometries and compose") {
    Rng rng = block_rng(7, 1, 1);
    std::uniform_real_distribution<double> U(-2, 2);
    for (int i = 0; i < 200; ++i) {
        MobiusReal g = MobiusReal::frame(PointH(U(rng), std::exp(U(rng)))) * MobiusReal::rotation(U(rng));
        PointH a(U(rng), std::exp(U(rng))), b(U(rng), std::exp(U(rng)));
        CHECK(distance(mobius_apply(g, a), mobius_apply(g, b)) == doctest::Approx(distance(a, b)).epsilon(1e-9));
        MobiusReal h = MobiusReal::diagonal(U(rng));
        PointH lhs = mobius_apply(g * h, a), rhs = mobius_apply(g, mobius_apply(h, a));
        CHECK(distance(lhs, rhs) < 1e-9);
        CHECK((g * g.inverse()).approx_equal(MobiusReal::identity(), 1e-10));
    }
    PointH z(0.3, 2.0);
    CHECK(distance(mobius_apply(MobiusReal::frame(z), PointH::i()), z) < 1e-14);
    CHECK(distance(mobius_apply(MobiusReal::rotation(0.7), PointH::i()), PointH::i()) < 1e-14);
}

TEST_CASE("sphere points lie at distance r and sweep the circle") {
    for (double r : {0.01, 0.5, 1.0, 5.0, 20.0}) {
        PointH z(0.4, 0.3);
        for (double th : {0.0, 0.3, 1.0, 2.0, 3.1}) CHECK(distance(z, sphere_point(z, r, th)) == doctest::Approx(r).epsilon(1e-9));
    }
    // the two ends of the half-circle sweep are the geodesic endpoints through the vertical line
    PointH up = sphere_point(PointH::i(), 1.0, 0.0);
    CHECK(std::abs(up.x()) < 1e-14);
}

TEST_CASE("ball volume and its inverse") {
    CHECK(ball_volume(0) == 0.0);
    CHECK(ball_volume(1.0) == doctest::Approx(2 * M_PI * (std::cosh(1.0) - 1)));
    for (double r : {0.1, 1.0, 3.0, 10.0}) CHECK(inverse_ball_radius(ball_volume(r)) == doctest::Approx(r).epsilon(1e-12));
}

TEST_CASE("rectangle measure against sampling") {
    Rect R{-0.5, 0.5, 1.0, 3.0};
    CHECK(rect_measure(R) == doctest::Approx(2.0 / 3.0));
    Rng rng = block_rng(7, 1, 2);
    for (int i = 0; i < 1000; ++i) {
        auto z = sample_hyperbolic_measure(R, rng);
        CHECK(z.x() >= R.x0);
        CHECK(z.x() <= R.x1);
        CHECK(z.y() >= R.y0);
        CHECK(z.y() <= R.y1);
    }
    // u = 1/y is uniform under the hyperbolic measure
    int below = 0;
    for (int i = 0; i < 20000; ++i) below += sample_hyperbolic_measure(R, rng).y() < 1.5;
    CHECK(below / 20000.0 == doctest::Approx((1 - 1 / 1.5) / (1 - 1 / 3.0)).epsilon(0.03));
}

TEST_CASE("overflowing distances raise a range error") {
    PointH a(0, 1e-300), b(0, 1e300);
    try {
        distance(a, b);
        FAIL("expected a range error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::range);
    }
}
