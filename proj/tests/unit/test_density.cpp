#include "hypercut/density.hpp"
#include "hypercut/error.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <doctest.h>

#include <cmath>

using namespace hypercut;
using namespace hypercut::covers;

TEST_CASE("M(p) counts multiplicities at or above p") {
    EigenvalueBudget b({{3, 5}, {4, 2}}, 100);
    CHECK(M_of_p(b, 3.5) == 2);
    CHECK(M_of_p(b, 2 + 1e-12) == 7);
    CHECK(M_of_p(b, 3) == 7);
    CHECK(M_of_p(b, 4.5) == 0);
    CHECK(b.total() == 7);
    CHECK(b.linear_total());
    CHECK_THROWS_AS(M_of_p(b, 2.0), Error);
}

TEST_CASE("budgets validate their entries") {
    CHECK_THROWS_AS(EigenvalueBudget({{2.0, 1}}, 10), Error);
    CHECK_THROWS_AS(EigenvalueBudget({{3.0, 0}}, 10), Error);
    CHECK_THROWS_AS(EigenvalueBudget({{4.0, 1}, {3.0, 1}}, 10), Error);
    CHECK_THROWS_AS(EigenvalueBudget({}, 0.5), Error);
    EigenvalueBudget empty({}, 50);
    CHECK(empty.total() == 0);
    CHECK(density_condition_check(empty, 1, 0.01).pass);
}

TEST_CASE("the A = 1 synthetic budget meets the density condition") {
    for (double N : {1e3, 1e4, 1e5, 1e6}) {
        auto b = EigenvalueBudget::synthetic_a1(N, {3, 4, 6, 8, 12});
        auto chk = density_condition_check(b, 1, 0.1, 2.0);
        CHECK(chk.worst_ratio <= 1);
        CHECK(chk.pass);
    }
    auto u = EigenvalueBudget::uniform(1e4, 50);
    CHECK_FALSE(density_condition_check(u, 1, 0.1).pass);
}

TEST_CASE("requirement terms satisfy the summation-by-parts identity") {
    std::vector<EigenvalueBudget> bs;
    for (double N : {1e3, 1e4, 1e5}) bs.push_back(EigenvalueBudget::synthetic_a1(N, {3, 4, 6, 8, 12}));
    GrowthFunction g{1.2, 0, 0};
    auto rep = normal_cover_requirement(bs, g);
    REQUIRE(rep.rows.size() == 3);
    for (std::size_t i = 0; i < bs.size(); ++i) {
        const auto& row = rep.rows[i];
        CHECK(row.identity_residual < 1e-12);
        auto f = [&](double p) { return double(M_of_p(bs[i], p)) * std::exp(-2 * row.g / p) / (p * p); };
        double q = 0;
        double prev = 2;
        for (const auto& e : bs[i].entries()) {
            q += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, prev + 1e-12, e.p, 10, 1e-13);
            prev = e.p;
        }
        CHECK(row.req_integral == doctest::Approx(std::pow(row.g, 3) * q).epsilon(1e-8));
    }
    CHECK_THROWS_AS(normal_cover_requirement({bs[0], bs[1]}, g), Error);
    CHECK_THROWS_AS(normal_cover_requirement({bs[1], bs[0], bs[2]}, g), Error);
}

TEST_CASE("vanishing proxy") {
    CHECK(vanishing_proxy({1.0, 0.5, 0.05}));
    CHECK_FALSE(vanishing_proxy({1.0, 0.5, 0.2}));
    CHECK_FALSE(vanishing_proxy({1.0, 1.0, 0.01}));
    CHECK(vanishing_proxy({0.0, 0.0, 0.0}));
}

TEST_CASE("radius dilation and covering bounds") {
    CHECK(lp_radius_dilation(4, 3, 1) == doctest::Approx(2 * (3 + std::log(3.0))));
    auto [lo, hi] = covering_norm_bounds(100, 4, 2);
    CHECK(lo == doctest::Approx(0.2));
    CHECK(hi == doctest::Approx(0.4));
    GrowthFunction g{1, 3, 0};
    CHECK(g.dominates(2, 1, 50));
    CHECK_FALSE(GrowthFunction{1, 1, 0}.dominates(2, 2, 50));
}

TEST_CASE("bound total shrinks when exceptional entries are removed") {
    EigenvalueBudget full({{3, 10}, {4, 20}, {8, 5}}, 1000);
    EigenvalueBudget part({{4, 20}, {8, 5}}, 1000);
    EigenvalueBudget none({}, 1000);
    for (double r : {0.5, 2.0, 6.0}) {
        CHECK(bound_total(r, part, 2) <= bound_total(r, full, 2));
        CHECK(bound_total(r, none, 2) <= bound_total(r, part, 2));
    }
    CHECK(bound_total(1.0, none, 2, 3.0) == doctest::Approx(9 * bound_total(1.0, none, 2)));
}
