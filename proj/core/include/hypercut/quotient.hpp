#pragma once

#include "hypercut/modular.hpp"
#include "hypercut/parallel.hpp"

#include <optional>
#include <unordered_map>
#include <vector>

namespace hypercut::modular {

// Point of X_q: base point in the standard domain plus the sheet s, with lift s^{-1} * base.
// The cover group PSL2(Z/q) acts by isometries through right multiplication of the sheet.
struct QuotientPoint {
    QuotientPoint(geom::PointH base, CosetModQ sheet);
    geom::PointH base;
    CosetModQ sheet;
};

// Principal congruence cover X_q with its finite cover group.
class CongruenceCover {
public:
    explicit CongruenceCover(int q);
    int q() const noexcept { return q_; }
    std::size_t order() const noexcept { return elements_.size(); }
    const std::vector<CosetModQ>& elements() const noexcept { return elements_; }
    std::size_t index(const CosetModQ& c) const;
    // Unchecked lookup for hot loops; c must belong to the cover.
    std::size_t fast_index(const CosetModQ& c) const {
        return dense_.empty() ? index(c) : std::size_t(dense_[c.code()]);
    }
    double area() const; // mu(X_q) = N_q pi / 3
    double R_X() const;

private:
    int q_;
    std::vector<CosetModQ> elements_;
    std::unordered_map<std::uint64_t, std::uint32_t> index_;
    std::vector<std::int32_t> dense_;
};

// Min of d(z1, g z2) over g == s1 s2^{-1} (mod q); nullopt when it exceeds R_max.
std::optional<double> quotient_distance(const QuotientPoint& p1, const QuotientPoint& p2, double R_max);

struct InjectivityRadius {
    double radius;           // half the shortest displacement by a non-stabilizing element of Gamma(q)
    int stabilizer_order;    // elements of Gamma(q) (in PSL2) fixing the lift, identity included
    bool lower_bound_only;   // nothing found within R_max; radius is R_max / 2
};

InjectivityRadius injectivity_radius(const QuotientPoint& p, double R_max);

constexpr double max_query_radius = 30.0;

// Distance queries from a fixed point to many points of the truncated domain y <= Y,
// using one precomputed orbit of the source bucketed by residue class.
class DistanceOracle {
public:
    DistanceOracle(const QuotientPoint& source, double R_max, double Y);
    std::optional<double> operator()(const QuotientPoint& p) const;
    double R_max() const noexcept { return R_max_; }
    std::size_t orbit_size() const noexcept { return orbit_count_; }

private:
    QuotientPoint source_;
    double R_max_, Y_;
    std::size_t orbit_count_ = 0;
    std::unordered_map<std::uint64_t, std::vector<geom::PointH>> buckets_;
};

// Largest distance from i to a point of the standard domain with y <= Y.
double domain_radius(double Y);

// Fraction of the modular-domain area above height Y: (1/Y) / (pi/3).
double truncated_fraction(double Y);

// Uniform sample of the truncated domain (y <= Y), no sheet.
geom::PointH sample_domain(double Y, Rng& rng);

QuotientPoint sample_uniform_quotient(const CongruenceCover& cover, double Y, Rng& rng);

} // namespace hypercut::modular
