#include "hypercut/error.hpp"
#include "hypercut/quotient.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

using namespace hypercut;
using namespace hypercut::modular;

namespace {

// Brute force over all integer matrices with bounded entries.
std::set<std::tuple<long, long, long, long>> brute_ball(double bound) {
    const double lim = 2 * std::cosh(bound);
    const long e = long(std::floor(std::sqrt(lim)));
    std::set<std::tuple<long, long, long, long>> out;
    for (long a = -e; a <= e; ++a)
        for (long b = -e; b <= e; ++b)
            for (long c = -e; c <= e; ++c)
                for (long d = -e; d <= e; ++d) {
                    if (a * d - b * c != 1) continue;
                    if (double(a * a + b * b + c * c + d * d) > lim) continue;
                    // canonical sign: first nonzero entry positive
                    long s = a != 0 ? a : b != 0 ? b : c != 0 ? c : d;
                    if (s > 0) out.insert({a, b, c, d});
                }
    return out;
}

} // namespace

TEST_CASE("ball enumeration matches brute force") {
    for (double B : {0.5, 1.5, 2.5, 3.5, 4.2}) {
        auto oracle = brute_ball(B);
        std::set<std::tuple<long, long, long, long>> got;
        for (const auto& g : enumerate_ball(B)) {
            long s = g.a() != 0 ? g.a() : g.b() != 0 ? g.b() : g.c() != 0 ? g.c() : g.d();
            long sg = s > 0 ? 1 : -1;
            got.insert({sg * g.a(), sg * g.b(), sg * g.c(), sg * g.d()});
        }
        CHECK(got == oracle);
        CHECK(enumerate_ball(B).size() == oracle.size());
    }
}

TEST_CASE("ball enumeration refuses runaway sizes") {
    try {
        enumerate_ball(40);
        FAIL("expected a capacity error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::capacity);
    }
}

TEST_CASE("group elements multiply with overflow detection") {
    auto g = GroupElement::S() * GroupElement::T(3);
    CHECK(g * g.inverse() == GroupElement::identity());
    CHECK((GroupElement::S() * GroupElement::S()).is_identity()); // S^2 = -1 in SL2
    CHECK(GroupElement::T(2) * GroupElement::T(5) == GroupElement::T(7));
    GroupElement upper(1, std::int64_t(1) << 32, 0, 1), lower(1, 0, std::int64_t(1) << 32, 1);
    CHECK_THROWS_AS(upper * lower, Error);
    CHECK_THROWS_AS(GroupElement(1, 1, 1, 1), Error);
}

TEST_CASE("coset counts match the closed form") {
    const int expected[] = {1, 6, 12, 24, 60, 72, 168, 192, 324, 360};
    for (int q = 1; q <= 10; ++q) {
        CHECK(coset_count_closed_form(q) == expected[q - 1]);
        CHECK(int(enumerate_cosets(q).size()) == expected[q - 1]);
    }
    CHECK_THROWS_AS(enumerate_cosets(0), Error);
    CHECK_THROWS_AS(enumerate_cosets(max_modulus + 1), Error);
}

TEST_CASE("cosets form a group (exhaustive for q <= 5)") {
    for (int q = 2; q <= 5; ++q) {
        auto els = enumerate_cosets(q);
        std::set<std::uint64_t> codes;
        for (const auto& e : els) codes.insert(e.code());
        CHECK(codes.size() == els.size());
        for (const auto& a : els) {
            CHECK(codes.count(a.inverse().code()) == 1);
            CHECK(a * a.inverse() == CosetModQ::identity(q));
            for (const auto& b : els) CHECK(codes.count((a * b).code()) == 1);
        }
        // associativity on a slice
        for (std::size_t i = 0; i < els.size(); i += 3)
            for (std::size_t j = 0; j < els.size(); j += 5)
                for (std::size_t k = 0; k < els.size(); k += 7)
                    CHECK((els[i] * els[j]) * els[k] == els[i] * (els[j] * els[k]));
    }
}

TEST_CASE("left generator updates agree with multiplication") {
    for (int q : {3, 5, 7}) {
        for (const auto& s : enumerate_cosets(q)) {
            CHECK(s.left_S() == CosetModQ::reduce(GroupElement::S(), q) * s);
            CHECK(s.left_T(-4) == CosetModQ::reduce(GroupElement::T(-4), q) * s);
        }
    }
}

TEST_CASE("reduction lands in the standard domain with a consistent gamma") {
    Rng rng = block_rng(3, 1, 0);
    std::uniform_real_distribution<double> X(-50, 50), L(-8, 3);
    for (int i = 0; i < 2000; ++i) {
        geom::PointH z(X(rng), std::exp(L(rng)));
        auto r = reduce_fundamental(z);
        CHECK(in_fundamental_domain(r.point));
        CHECK(geom::distance(r.gamma.apply(z), r.point) < 1e-7);
    }
}

TEST_CASE("quotient distance is symmetric and invariant under the cover group") {
    for (int q : {2, 3}) {
        CongruenceCover cover(q);
        Rng rng = block_rng(5, 1, std::uint64_t(q));
        for (int i = 0; i < 40; ++i) {
            auto a = sample_uniform_quotient(cover, 2.0, rng), b = sample_uniform_quotient(cover, 2.0, rng);
            auto ab = quotient_distance(a, b, 6), ba = quotient_distance(b, a, 6);
            REQUIRE(ab);
            REQUIRE(ba);
            CHECK(*ab == doctest::Approx(*ba).epsilon(1e-12));
            for (const auto& h : cover.elements()) {
                auto moved = quotient_distance({a.base, a.sheet * h}, {b.base, b.sheet * h}, 6);
                CHECK(*moved == *ab);
            }
            // same sheet distance never exceeds the direct upper-half-plane distance of the lifts
            if (a.sheet == b.sheet) CHECK(*ab <= geom::distance(a.base, b.base) + 1e-12);
        }
    }
}

TEST_CASE("quotient distance agrees with a brute-force orbit search") {
    CongruenceCover cover(3);
    Rng rng = block_rng(5, 2, 0);
    auto ball = enumerate_ball(9.0);
    for (int i = 0; i < 20; ++i) {
        auto a = sample_uniform_quotient(cover, 2.0, rng), b = sample_uniform_quotient(cover, 2.0, rng);
        auto want = a.sheet * b.sheet.inverse();
        double best = INFINITY;
        for (const auto& g : ball)
            if (CosetModQ::reduce(g, 3) == want) best = std::min(best, geom::distance(a.base, g.apply(b.base)));
        auto d = quotient_distance(a, b, 4);
        REQUIRE(d);
        CHECK(*d == doctest::Approx(best).epsilon(1e-10));
    }
}

TEST_CASE("distance oracle matches quotient distance") {
    CongruenceCover cover(5);
    QuotientPoint x0{geom::PointH::i(), CosetModQ::identity(5)};
    DistanceOracle oracle(x0, 6.0, 10.0);
    Rng rng = block_rng(5, 3, 0);
    for (int i = 0; i < 200; ++i) {
        auto p = sample_uniform_quotient(cover, 4.0, rng);
        auto a = oracle(p), b = quotient_distance(x0, p, 6.0);
        CHECK(bool(a) == bool(b));
        if (a && b) CHECK(*a == doctest::Approx(*b).epsilon(1e-10));
    }
}

TEST_CASE("injectivity radius at i") {
    // the shortest Gamma(q) translate of i: q=5 gives a^2+b^2+c^2+d^2 = 27
    auto r5 = injectivity_radius({geom::PointH::i(), CosetModQ::identity(5)}, 8);
    CHECK(r5.radius == doctest::Approx(0.5 * std::acosh(13.5)).epsilon(1e-12));
    CHECK(r5.stabilizer_order == 1);
    auto r1 = injectivity_radius({geom::PointH::i(), CosetModQ::identity(1)}, 8);
    CHECK(r1.stabilizer_order == 2); // S fixes i in PSL2(Z)
}

TEST_CASE("cover geometry constants") {
    CongruenceCover c5(5), c2(2), c3(3);
    CHECK(c5.area() == doctest::Approx(60 * M_PI / 3));
    CHECK(c5.R_X() == doctest::Approx(std::acosh(11.0)).epsilon(1e-12));
    CHECK(c2.R_X() == doctest::Approx(std::acosh(2.0)).epsilon(1e-12));
    CHECK(c3.R_X() == doctest::Approx(std::acosh(3.0)).epsilon(1e-12));
    CHECK(truncated_fraction(10) == doctest::Approx(0.1 / (M_PI / 3)));
}

TEST_CASE("uniform domain sampler covers the truncated domain evenly") {
    Rng rng = block_rng(9, 1, 0);
    int above = 0;
    const int n = 40000;
    for (int i = 0; i < n; ++i) {
        auto z = sample_domain(10, rng);
        CHECK(in_fundamental_domain(z));
        CHECK(z.y() <= 10);
        above += z.y() > 2;
    }
    // area above y = 2 is 1/2 - 1/10 out of pi/3 - 1/10
    CHECK(above / double(n) == doctest::Approx((0.5 - 0.1) / (M_PI / 3 - 0.1)).epsilon(0.03));
}
