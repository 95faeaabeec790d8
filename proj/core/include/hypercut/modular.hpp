#pragma once

#include "hypercut/geometry.hpp"

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace hypercut::modular {

// Element of PSL2(Z). Entries are 64-bit with overflow checks; the stored sign is the
// lexicographically larger of the two representatives.
class GroupElement {
public:
    GroupElement() = default;
    GroupElement(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d);

    static GroupElement identity() { return {}; }
    static GroupElement S() { return {0, -1, 1, 0}; }
    static GroupElement T(std::int64_t n = 1) { return {1, n, 0, 1}; }

    std::int64_t a() const noexcept { return a_; }
    std::int64_t b() const noexcept { return b_; }
    std::int64_t c() const noexcept { return c_; }
    std::int64_t d() const noexcept { return d_; }

    GroupElement operator*(const GroupElement& o) const;
    GroupElement inverse() const { return {d_, -b_, -c_, a_}; }
    bool operator==(const GroupElement& o) const = default;
    bool is_identity() const { return a_ == 1 && b_ == 0 && c_ == 0 && d_ == 1; }

    // a^2 + b^2 + c^2 + d^2 = 2 cosh d(i, g i)
    double frobenius2() const;
    geom::MobiusReal to_mobius() const;
    geom::PointH apply(const geom::PointH& z) const;
    std::string str() const;

private:
    std::int64_t a_ = 1, b_ = 0, c_ = 0, d_ = 1;
};

// Element of PSL2(Z/qZ); canonical representative is the lexicographically smaller of +-M.
class CosetModQ {
public:
    CosetModQ() = default;
    CosetModQ(int q, std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d);
    static CosetModQ identity(int q) { return {q, 1, 0, 0, 1}; }
    static CosetModQ reduce(const GroupElement& g, int q) { return {q, g.a(), g.b(), g.c(), g.d()}; }

    int q() const noexcept { return q_; }
    int a() const noexcept { return a_; }
    int b() const noexcept { return b_; }
    int c() const noexcept { return c_; }
    int d() const noexcept { return d_; }

    CosetModQ operator*(const CosetModQ& o) const;
    CosetModQ inverse() const { return {q_, d_, -b_, -c_, a_}; }
    // Left multiplication by T^n and S, used while reducing points.
    CosetModQ left_T(std::int64_t n) const;
    CosetModQ left_S() const;

    bool operator==(const CosetModQ& o) const = default;
    bool operator<(const CosetModQ& o) const { return code() < o.code(); }
    std::uint64_t code() const;
    std::string str() const;

private:
    void canonicalize();
    int q_ = 1, a_ = 0, b_ = 0, c_ = 0, d_ = 0;
};

// Applies the standard reduction into |x| <= 1/2, |z| >= 1. The visitor is called with
// ('T', n) for z -> z + n and ('S', 0) for z -> -1/z, in the order applied.
template <class Visitor>
geom::PointH reduce_steps(geom::PointH z, Visitor&& visit, long max_iter = 1000000);

struct Reduction {
    geom::PointH point;
    GroupElement gamma; // gamma * z == point
};

Reduction reduce_fundamental(const geom::PointH& z);

bool in_fundamental_domain(const geom::PointH& z, double tol = 1e-12);

// All canonical g with a^2+b^2+c^2+d^2 <= 2 cosh(bound), i.e. d(i, g i) <= bound.
std::vector<GroupElement> enumerate_ball(double bound);
// Element count above which enumerate_ball refuses.
constexpr double enumeration_cap = 3.0e7;
double enumeration_estimate(double bound);

int coset_count_closed_form(int q);
std::vector<CosetModQ> enumerate_cosets(int q);
constexpr int max_modulus = 101;

std::int64_t gcd64(std::int64_t a, std::int64_t b);

[[noreturn]] void throw_reduction_cap();

// ---- inline implementation ----

template <class Visitor>
geom::PointH reduce_steps(geom::PointH z, Visitor&& visit, long max_iter) {
    double x = z.x(), y = z.y();
    for (long it = 0; it < max_iter; ++it) {
        double n = std::nearbyint(x);
        if (n != 0) {
            x -= n;
            visit('T', std::int64_t(-n));
        }
        double r2 = x * x + y * y;
        if (r2 < 1.0) {
            x = -x / r2;
            y = y / r2;
            visit('S', 0);
            continue;
        }
        if (std::abs(x) <= 0.5) return {x, y};
    }
    throw_reduction_cap();
}

} // namespace hypercut::modular
