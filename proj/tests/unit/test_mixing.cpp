#include "hypercut/error.hpp"
#include "hypercut/mixing.hpp"
#include "hypercut/modular.hpp"
#include "hypercut/torus.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace hypercut;
using namespace hypercut::mixing;

namespace {

double cell_oracle(double x0, double x1, double u0, double u1) {
    auto len = [&](double x) {
        double cap = std::abs(x) < 1 ? 1 / std::sqrt(1 - x * x) : INFINITY;
        return std::max(0.0, std::min(u1, cap) - u0);
    };
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(len, x0, x1, 15, 1e-12);
}

} // namespace

TEST_CASE("clipped cell measure matches quadrature") {
    const double cases[][4] = {{-0.5, 0.5, 0.0, 1.0},   {-0.5, -0.3, 0.9, 1.1}, {0.1, 0.4, 1.0, 1.05},
                               {0.3, 0.5, 1.02, 1.2},    {-0.2, 0.2, 0.5, 1.001}, {0.45, 0.5, 1.1, 1.16}};
    for (const auto& c : cases)
        CHECK(clipped_cell_measure(c[0], c[1], c[2], c[3]) == doctest::Approx(cell_oracle(c[0], c[1], c[2], c[3])).epsilon(1e-7));
}

TEST_CASE("cell partitions tile the quotient") {
    for (int q : {2, 3, 5}) {
        modular::CongruenceCover cover(q);
        CellPartition part(cover, 10.0);
        double sum = 0;
        for (std::size_t b = 0; b < part.bins_per_sheet(); ++b) sum += part.sheet_bin_measure(b);
        CHECK(sum * double(cover.order()) == doctest::Approx(cover.area()).epsilon(1e-9));
        CHECK(part.total() == doctest::Approx(cover.area()).epsilon(1e-12));
        CHECK(part.max_bin_measure() <= cover.area() / 1000 * (1 + 1e-12));
    }
    CHECK(CellPartition::resolution_for(modular::CongruenceCover(2), 10.0) == 16);
    CHECK(CellPartition::resolution_for(modular::CongruenceCover(5), 10.0) == 5);
}

TEST_CASE("points land in the bin that contains them") {
    modular::CongruenceCover cover(3);
    CellPartition part(cover, 10.0);
    Rng rng = block_rng(3, 0, 0);
    for (int i = 0; i < 2000; ++i) {
        auto z = modular::sample_domain(10.0, rng);
        auto b = part.local_bin(z);
        bool found = false;
        for (const auto& cell : part.grid_cells()) {
            const auto& r = cell.rect;
            if (cell.bin == b && z.x() >= r.x0 - 1e-12 && z.x() <= r.x1 + 1e-12 && z.y() >= r.y0 - 1e-12 &&
                z.y() <= r.y1 * (1 + 1e-12))
                found = true;
        }
        CHECK(found);
    }
}

TEST_CASE("quotient steps stay in the fundamental domain") {
    modular::CongruenceCover cover(5);
    modular::QuotientPoint p(geom::PointH::i(), modular::CosetModQ::identity(5));
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> th(0, M_PI);
    for (int i = 0; i < 500; ++i) {
        p = quotient_step(p, 1.0, th(rng));
        CHECK(modular::in_fundamental_domain(p.base));
        CHECK_NOTHROW(cover.index(p.sheet));
    }
}

TEST_CASE("tv profiles are deterministic across worker counts") {
    modular::CongruenceCover cover(2);
    TvConfig cfg;
    cfg.x0 = {geom::PointH::i(), modular::CosetModQ::identity(2)};
    cfg.k_max = 6;
    cfg.n_walkers = 20000;
    cfg.bootstrap = 20;
    cfg.seed = 5;
    auto a = tv_profile(cover, cfg);
    cfg.workers = 3;
    auto b = tv_profile(cover, cfg);
    CHECK(a.tv == b.tv);
    CHECK(a.ci_lo == b.ci_lo);
    CHECK(a.tv.front() > 1.9);
    for (std::size_t j = 0; j < a.tv.size(); ++j) CHECK(a.ci_lo[j] <= a.ci_hi[j]);
}

TEST_CASE("tv refuses partitions coarser than the bin rule") {
    modular::CongruenceCover cover(2);
    TvConfig cfg;
    cfg.x0 = {geom::PointH::i(), modular::CosetModQ::identity(2)};
    cfg.resolution = 3;
    cfg.n_walkers = 100;
    CHECK_THROWS_AS(tv_profile(cover, cfg), Error);
}

TEST_CASE("cutoff locator on a step profile has sub-grid width") {
    std::vector<double> t, tv;
    for (int i = 0; i <= 100; ++i) {
        t.push_back(i * 0.1);
        tv.push_back(i * 0.1 < 5.0 ? 2.0 : 0.0);
    }
    auto c = cutoff_locator(t, tv, 1.0, 4.0);
    CHECK(c.t_eps.at(1.0) == doctest::Approx(4.95));
    CHECK(std::abs(c.t_eps.at(0.1) - c.t_eps.at(1.9)) <= 0.1);
    CHECK(c.location == doctest::Approx(4.95 / 4.0));
    std::vector<double> flat(t.size(), 2.0);
    CHECK_THROWS_AS(cutoff_locator(t, flat, 1.0, 4.0), Error);
}

TEST_CASE("cutoff locator sees no cutoff on the torus") {
    std::vector<double> t;
    for (double s = 1e-5; s <= 8.0; s *= 1.01) t.push_back(s);
    for (double lambda : {1.0, 10.0}) {
        std::vector<double> ts;
        for (double s : t) ts.push_back(s * lambda);
        auto c = cutoff_locator(ts, torus::torus_l1_profile(lambda, ts), 1.0, 1.0);
        CHECK(c.width_over_location > 1.0);
    }
}

TEST_CASE("concentration fit refuses small samples and recovers an exponential tail") {
    std::vector<double> few(100, 1.0);
    CHECK_THROWS_AS(concentration_fit(few), Error);
    std::mt19937_64 rng(11);
    std::exponential_distribution<double> e(1.0);
    std::bernoulli_distribution sign(0.5);
    std::vector<double> s(200000);
    for (auto& v : s) v = 10 + (sign(rng) ? 1 : -1) * e(rng);
    auto rep = concentration_fit(s);
    CHECK(rep.R_med == doctest::Approx(10).epsilon(0.01));
    CHECK(rep.slope == doctest::Approx(-1).epsilon(0.05));
    CHECK(rep.conclusive);
}

TEST_CASE("distance to a rectangle matches a boundary search") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> ux(-2, 2), uy(0.1, 3);
    geom::Rect R{-0.3, 0.4, 0.8, 1.7};
    for (int i = 0; i < 200; ++i) {
        geom::PointH z(ux(rng), uy(rng));
        double brute = INFINITY;
        bool inside = z.x() >= R.x0 && z.x() <= R.x1 && z.y() >= R.y0 && z.y() <= R.y1;
        if (inside) brute = 0;
        const int m = 4000;
        for (int j = 0; j <= m; ++j) {
            double a = double(j) / m;
            double x = R.x0 + a * (R.x1 - R.x0), y = R.y0 * std::pow(R.y1 / R.y0, a);
            for (auto p : {geom::PointH(x, R.y0), geom::PointH(x, R.y1), geom::PointH(R.x0, y), geom::PointH(R.x1, y)})
                brute = std::min(brute, geom::distance(z, p));
        }
        double d = distance_to_rect(z, R);
        CHECK(d <= brute + 1e-9);
        CHECK(d >= brute - 2e-3);
    }
}

TEST_CASE("isoperimetric ball check at zero dilation measures the ball") {
    modular::CongruenceCover cover(5);
    CellPartition part(cover, 10.0);
    modular::QuotientPoint x0(geom::PointH::i(), modular::CosetModQ::identity(5));
    IsoConfig cfg;
    cfg.r = 0.0;
    cfg.n_mc = 200000;
    cfg.p_certified = true;
    auto res = isoperimetric_check_ball(part, x0, 0.5, cfg);
    CHECK(std::abs(res.c_prime - res.c) <= 4 * res.c_prime_se + 1e-4);
    CHECK(kappa(0.0, 2.0) == 1.0);
    CHECK(res.bound == doctest::Approx(res.c));
    cfg.r = 1.0;
    cfg.p_certified = false;
    CHECK(isoperimetric_check_ball(part, x0, 0.5, cfg).verdict == "not-asserted");
    CHECK_THROWS_AS(isoperimetric_check_ball(part, x0, 2.0, cfg), Error);
}
