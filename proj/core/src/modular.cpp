#include "hypercut/modular.hpp"

#include "hypercut/error.hpp"

#include <algorithm>
#include <sstream>

namespace hypercut::modular {

namespace {

std::int64_t mul_checked(std::int64_t x, std::int64_t y) {
    std::int64_t r;
    if (__builtin_mul_overflow(x, y, &r)) fail(ErrorKind::capacity, "PSL2(Z) entry overflow in multiplication");
    return r;
}

std::int64_t add_checked(std::int64_t x, std::int64_t y) {
    std::int64_t r;
    if (__builtin_add_overflow(x, y, &r)) fail(ErrorKind::capacity, "PSL2(Z) entry overflow in addition");
    return r;
}

std::int64_t mod_pos(std::int64_t x, int q) {
    std::int64_t r = x % q;
    return r < 0 ? r + q : r;
}

// Returns (x, y, g) with a x + b y = g = gcd(a, b) >= 0.
void ext_gcd(std::int64_t a, std::int64_t b, std::int64_t& x, std::int64_t& y, std::int64_t& g) {
    std::int64_t x0 = 1, y0 = 0, x1 = 0, y1 = 1;
    while (b != 0) {
        std::int64_t t = a / b;
        std::int64_t r = a - t * b;
        a = b;
        b = r;
        std::int64_t nx = x0 - t * x1, ny = y0 - t * y1;
        x0 = x1;
        y0 = y1;
        x1 = nx;
        y1 = ny;
    }
    if (a < 0) {
        a = -a;
        x0 = -x0;
        y0 = -y0;
    }
    x = x0;
    y = y0;
    g = a;
}

} // namespace

std::int64_t gcd64(std::int64_t a, std::int64_t b) {
    a = a < 0 ? -a : a;
    b = b < 0 ? -b : b;
    while (b) {
        std::int64_t t = a % b;
        a = b;
        b = t;
    }
    return a;
}

void throw_reduction_cap() {
    fail(ErrorKind::numeric, "fundamental-domain reduction exceeded the iteration cap");
}

GroupElement::GroupElement(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d)
    : a_(a), b_(b), c_(c), d_(d) {
    std::int64_t det = add_checked(mul_checked(a, d), -mul_checked(b, c));
    if (det != 1) fail(ErrorKind::domain, "integer matrix must have determinant 1");
    bool flip = a_ != 0 ? a_ < 0 : b_ != 0 ? b_ < 0 : c_ != 0 ? c_ < 0 : d_ < 0;
    if (flip) {
        a_ = -a_;
        b_ = -b_;
        c_ = -c_;
        d_ = -d_;
    }
}

GroupElement GroupElement::operator*(const GroupElement& o) const {
    return {add_checked(mul_checked(a_, o.a_), mul_checked(b_, o.c_)),
            add_checked(mul_checked(a_, o.b_), mul_checked(b_, o.d_)),
            add_checked(mul_checked(c_, o.a_), mul_checked(d_, o.c_)),
            add_checked(mul_checked(c_, o.b_), mul_checked(d_, o.d_))};
}

double GroupElement::frobenius2() const {
    double a = double(a_), b = double(b_), c = double(c_), d = double(d_);
    return a * a + b * b + c * c + d * d;
}

geom::MobiusReal GroupElement::to_mobius() const {
    return {double(a_), double(b_), double(c_), double(d_)};
}

geom::PointH GroupElement::apply(const geom::PointH& z) const { return geom::mobius_apply(to_mobius(), z); }

std::string GroupElement::str() const {
    std::ostringstream os;
    os << "[[" << a_ << ',' << b_ << "],[" << c_ << ',' << d_ << "]]";
    return os.str();
}

CosetModQ::CosetModQ(int q, std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) : q_(q) {
    if (q < 1) fail(ErrorKind::domain, "modulus must be at least 1");
    a_ = int(mod_pos(a, q));
    b_ = int(mod_pos(b, q));
    c_ = int(mod_pos(c, q));
    d_ = int(mod_pos(d, q));
    std::int64_t det = mod_pos(std::int64_t(a_) * d_ - std::int64_t(b_) * c_, q);
    if (det != mod_pos(1, q)) fail(ErrorKind::domain, "residue matrix must have determinant 1 mod q");
    canonicalize();
}

void CosetModQ::canonicalize() {
    auto neg = [this](int v) { return v == 0 ? 0 : q_ - v; };
    int na = neg(a_), nb = neg(b_), nc = neg(c_), nd = neg(d_);
    if (std::tie(na, nb, nc, nd) < std::tie(a_, b_, c_, d_)) {
        a_ = na;
        b_ = nb;
        c_ = nc;
        d_ = nd;
    }
}

CosetModQ CosetModQ::operator*(const CosetModQ& o) const {
    if (q_ != o.q_) fail(ErrorKind::domain, "cannot multiply residues with different moduli");
    std::int64_t a = std::int64_t(a_) * o.a_ + std::int64_t(b_) * o.c_;
    std::int64_t b = std::int64_t(a_) * o.b_ + std::int64_t(b_) * o.d_;
    std::int64_t c = std::int64_t(c_) * o.a_ + std::int64_t(d_) * o.c_;
    std::int64_t d = std::int64_t(c_) * o.b_ + std::int64_t(d_) * o.d_;
    return {q_, a, b, c, d};
}

CosetModQ CosetModQ::left_T(std::int64_t n) const {
    std::int64_t m = mod_pos(n, q_);
    return {q_, a_ + m * c_, b_ + m * d_, c_, d_};
}

CosetModQ CosetModQ::left_S() const { return {q_, -c_, -d_, a_, b_}; }

std::uint64_t CosetModQ::code() const {
    std::uint64_t q = std::uint64_t(q_);
    return ((std::uint64_t(a_) * q + std::uint64_t(b_)) * q + std::uint64_t(c_)) * q + std::uint64_t(d_);
}

std::string CosetModQ::str() const {
    std::ostringstream os;
    os << "[[" << a_ << ',' << b_ << "],[" << c_ << ',' << d_ << "]] mod " << q_;
    return os.str();
}

Reduction reduce_fundamental(const geom::PointH& z) {
    GroupElement g;
    auto p = reduce_steps(z, [&g](char kind, std::int64_t n) {
        g = (kind == 'T' ? GroupElement::T(n) : GroupElement::S()) * g;
    });
    return {p, g};
}

bool in_fundamental_domain(const geom::PointH& z, double tol) {
    return std::abs(z.x()) <= 0.5 + tol && z.x() * z.x() + z.y() * z.y() >= 1 - tol;
}

double enumeration_estimate(double bound) {
    // hyperbolic area of the ball over the area pi/3 of the modular domain
    return 6.0 * (std::cosh(bound) - 1.0) + 16.0;
}

std::vector<GroupElement> enumerate_ball(double bound) {
    if (bound < 0) fail(ErrorKind::domain, "enumeration bound must be non-negative");
    double est = enumeration_estimate(bound);
    if (est > enumeration_cap) {
        std::ostringstream os;
        os << "enumeration bound d(i, g i) <= " << bound << " needs about " << est
           << " elements, above the cap " << enumeration_cap;
        fail(ErrorKind::capacity, os.str());
    }
    const auto limit = std::int64_t(std::floor(2 * std::cosh(bound) * (1 + 1e-13)));
    std::vector<GroupElement> out;
    out.reserve(std::size_t(est));
    // c = 0: d = 1, a = 1, b free.
    for (std::int64_t b = 0; 2 + b * b <= limit; ++b) {
        out.emplace_back(1, b, 0, 1);
        if (b) out.emplace_back(1, -b, 0, 1);
    }
    for (std::int64_t c = 1; c * c <= limit; ++c) {
        std::int64_t rem = limit - c * c;
        auto dmax = std::int64_t(std::sqrt(double(rem))) + 1;
        for (std::int64_t d = -dmax; d <= dmax; ++d) {
            if (c * c + d * d > limit) continue;
            if (gcd64(c, d) != 1) continue;
            // a d - b c = 1: ext_gcd gives d x + c y = 1, so a = x, b = -y.
            std::int64_t x, y, g;
            ext_gcd(d, c, x, y, g);
            std::int64_t a0 = x, b0 = -y;
            double nn = double(c * c + d * d);
            double dot = double(a0 * c + b0 * d);
            double cc = double(a0 * a0 + b0 * b0) - double(limit - c * c - d * d);
            double disc = dot * dot - nn * cc;
            if (disc < 0) continue;
            double sq = std::sqrt(disc);
            auto klo = std::int64_t(std::floor((-dot - sq) / nn)) - 1;
            auto khi = std::int64_t(std::ceil((-dot + sq) / nn)) + 1;
            for (std::int64_t k = klo; k <= khi; ++k) {
                std::int64_t a = a0 + k * c, b = b0 + k * d;
                if (a * a + b * b + c * c + d * d <= limit) out.emplace_back(a, b, c, d);
            }
        }
    }
    return out;
}

int coset_count_closed_form(int q) {
    if (q < 1) fail(ErrorKind::domain, "modulus must be at least 1");
    if (q > max_modulus) fail(ErrorKind::capacity, "modulus above the supported cap");
    if (q == 1) return 1;
    double n = double(q) * q * q;
    int m = q;
    for (int p = 2; p <= m; ++p) {
        if (m % p) continue;
        n *= 1.0 - 1.0 / (double(p) * p);
        while (m % p == 0) m /= p;
    }
    auto full = std::int64_t(std::llround(n));
    return int(q > 2 ? full / 2 : full);
}

std::vector<CosetModQ> enumerate_cosets(int q) {
    if (q < 1) fail(ErrorKind::domain, "modulus must be at least 1");
    if (q > max_modulus) fail(ErrorKind::capacity, "modulus above the supported cap");
    std::vector<CosetModQ> out;
    if (q == 1) return {CosetModQ::identity(1)};
    for (std::int64_t c = 0; c < q; ++c) {
        for (std::int64_t d = 0; d < q; ++d) {
            if (gcd64(gcd64(c, d), q) != 1) continue;
            // lift (c, d) to a primitive integer row, then complete it to SL2(Z)
            std::int64_t cl = c == 0 ? q : c, dl = d;
            while (gcd64(cl, dl) != 1) dl += q;
            std::int64_t x, y, g;
            ext_gcd(dl, cl, x, y, g);
            std::int64_t a0 = x, b0 = -y;
            for (std::int64_t t = 0; t < q; ++t) {
                CosetModQ e(q, a0 + t * cl, b0 + t * dl, cl, dl);
                if (e.c() == int(c) && e.d() == int(d)) out.push_back(e);
            }
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace hypercut::modular
