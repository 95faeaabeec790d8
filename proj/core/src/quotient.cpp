#include "hypercut/quotient.hpp"

#include "hypercut/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace hypercut::modular {

QuotientPoint::QuotientPoint(geom::PointH b, CosetModQ s) : base(b), sheet(s) {
    if (!in_fundamental_domain(base)) fail(ErrorKind::domain, "quotient base point lies outside the standard domain");
}

CongruenceCover::CongruenceCover(int q) : q_(q), elements_(enumerate_cosets(q)) {
    for (std::size_t i = 0; i < elements_.size(); ++i) index_.emplace(elements_[i].code(), std::uint32_t(i));
    if (q <= 40) {
        std::size_t q4 = std::size_t(q) * q * q * q;
        dense_.assign(q4, -1);
        for (std::size_t i = 0; i < elements_.size(); ++i) dense_[elements_[i].code()] = std::int32_t(i);
    }
}

std::size_t CongruenceCover::index(const CosetModQ& c) const {
    auto it = index_.find(c.code());
    if (c.q() != q_ || it == index_.end()) fail(ErrorKind::domain, "residue does not belong to this cover");
    return it->second;
}

double CongruenceCover::area() const { return double(elements_.size()) * M_PI / 3.0; }

double CongruenceCover::R_X() const { return geom::inverse_ball_radius(area()); }

namespace {

void check_pair(const QuotientPoint& p1, const QuotientPoint& p2, double R_max) {
    if (p1.sheet.q() != p2.sheet.q()) fail(ErrorKind::domain, "points live on different covers");
    if (!(R_max >= 0) || R_max > max_query_radius) fail(ErrorKind::domain, "R_max must lie in [0, 30]");
}

} // namespace

std::optional<double> quotient_distance(const QuotientPoint& p1, const QuotientPoint& p2, double R_max) {
    check_pair(p1, p2, R_max);
    const int q = p1.sheet.q();
    const CosetModQ target = p1.sheet * p2.sheet.inverse();
    const geom::PointH i = geom::PointH::i();
    double bound = R_max + geom::distance(i, p1.base) + geom::distance(i, p2.base);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& g : enumerate_ball(bound)) {
        if (!(CosetModQ::reduce(g, q) == target)) continue;
        best = std::min(best, geom::distance(p1.base, g.apply(p2.base)));
    }
    if (best <= R_max) return best;
    return std::nullopt;
}

InjectivityRadius injectivity_radius(const QuotientPoint& p, double R_max) {
    check_pair(p, p, R_max);
    const int q = p.sheet.q();
    const CosetModQ id = CosetModQ::identity(q);
    const geom::PointH i = geom::PointH::i();
    // 2 * radius <= R_max needs displacements up to R_max
    double bound = R_max + 2 * geom::distance(i, p.base);
    double best = std::numeric_limits<double>::infinity();
    int stab = 0;
    for (const auto& g : enumerate_ball(bound)) {
        if (!(CosetModQ::reduce(g, q) == id)) continue;
        double d = geom::distance(p.base, g.apply(p.base));
        if (d < 1e-9) {
            ++stab;
            continue;
        }
        best = std::min(best, d);
    }
    if (best <= R_max) return {best / 2, stab, false};
    return {R_max / 2, stab, true};
}

double domain_radius(double Y) { return geom::distance(geom::PointH::i(), geom::PointH(0.5, Y)); }

double truncated_fraction(double Y) { return (1.0 / Y) / (M_PI / 3.0); }

DistanceOracle::DistanceOracle(const QuotientPoint& source, double R_max, double Y)
    : source_(source), R_max_(R_max), Y_(Y) {
    check_pair(source, source, R_max);
    if (Y < 2) fail(ErrorKind::domain, "cusp cap Y must be at least 2");
    const int q = source.sheet.q();
    const geom::PointH i = geom::PointH::i();
    double reach = R_max + domain_radius(Y);
    double bound = reach + geom::distance(i, source.base);
    double cosh_reach = std::cosh(reach);
    for (const auto& g : enumerate_ball(bound)) {
        // d(z1, g z2) = d(g^{-1} z1, z2) with g == s1 s2^{-1}
        geom::PointH img = g.inverse().apply(source.base);
        if (geom::cosh_distance(i, img) > cosh_reach * (1 + 1e-12)) continue;
        auto key = CosetModQ::reduce(g, q).code();
        buckets_[key].push_back(img);
        ++orbit_count_;
    }
}

std::optional<double> DistanceOracle::operator()(const QuotientPoint& p) const {
    if (p.sheet.q() != source_.sheet.q()) fail(ErrorKind::domain, "points live on different covers");
    if (p.base.y() > Y_ * (1 + 1e-12)) return quotient_distance(source_, p, R_max_);
    auto key = (source_.sheet * p.sheet.inverse()).code();
    auto it = buckets_.find(key);
    if (it == buckets_.end()) return std::nullopt;
    double best = std::numeric_limits<double>::infinity();
    const geom::PointH* arg = nullptr;
    for (const auto& w : it->second) {
        double c = geom::cosh_distance(w, p.base);
        if (c < best) {
            best = c;
            arg = &w;
        }
    }
    if (!arg) return std::nullopt;
    double d = geom::distance(*arg, p.base);
    if (d <= R_max_) return d;
    return std::nullopt;
}

geom::PointH sample_domain(double Y, Rng& rng) {
    if (Y < 2) fail(ErrorKind::domain, "cusp cap Y must be at least 2");
    const double u_lo = 1.0 / Y, u_hi = 2.0 / std::sqrt(3.0);
    for (;;) {
        double x = uniform01(rng) - 0.5;
        double u = u_hi - (u_hi - u_lo) * uniform01(rng);
        double y = 1.0 / u;
        if (x * x + y * y >= 1.0) return {x, y};
    }
}

QuotientPoint sample_uniform_quotient(const CongruenceCover& cover, double Y, Rng& rng) {
    auto z = sample_domain(Y, rng);
    std::uniform_int_distribution<std::size_t> pick(0, cover.order() - 1);
    return {z, cover.elements()[pick(rng)]};
}

} // namespace hypercut::modular
