#include "hypercut/geometry.hpp"

#include "hypercut/error.hpp"

#include <cmath>
#include <sstream>

namespace hypercut::geom {

PointH::PointH(double x, double y) : x_(x), y_(y) {
    if (!std::isfinite(x) || !std::isfinite(y)) fail(ErrorKind::domain, "point has non-finite coordinates");
    if (!(y > 0)) {
        std::ostringstream os;
        os << "point (" << x << ", " << y << ") is not in the upper half-plane";
        fail(ErrorKind::domain, os.str());
    }
}

bool operator==(const PointH& a, const PointH& b) { return a.x() == b.x() && a.y() == b.y(); }

MobiusReal::MobiusReal(double a, double b, double c, double d) {
    double det = a * d - b * c;
    if (!std::isfinite(det) || !(det > 0)) fail(ErrorKind::domain, "matrix must have positive determinant");
    double s = std::sqrt(det);
    a_ = a / s;
    b_ = b / s;
    c_ = c / s;
    d_ = d / s;
}

MobiusReal MobiusReal::diagonal(double r) { return {std::exp(r / 2), 0, 0, std::exp(-r / 2)}; }

MobiusReal MobiusReal::rotation(double theta) {
    double c = std::cos(theta), s = std::sin(theta);
    return {c, s, -s, c};
}

MobiusReal MobiusReal::frame(const PointH& z) {
    double sy = std::sqrt(z.y());
    return {sy, z.x() / sy, 0, 1 / sy};
}

MobiusReal MobiusReal::operator*(const MobiusReal& o) const {
    return {a_ * o.a_ + b_ * o.c_, a_ * o.b_ + b_ * o.d_, c_ * o.a_ + d_ * o.c_, c_ * o.b_ + d_ * o.d_};
}

bool MobiusReal::approx_equal(const MobiusReal& o, double tol) const {
    auto close = [tol](const MobiusReal& p, const MobiusReal& q, double sgn) {
        return std::abs(p.a_ - sgn * q.a_) <= tol && std::abs(p.b_ - sgn * q.b_) <= tol &&
               std::abs(p.c_ - sgn * q.c_) <= tol && std::abs(p.d_ - sgn * q.d_) <= tol;
    };
    return close(*this, o, 1.0) || close(*this, o, -1.0);
}

double cosh_distance(const PointH& z, const PointH& w) {
    double dx = z.x() - w.x(), dy = z.y() - w.y();
    return 1 + (dx * dx + dy * dy) / (2 * z.y() * w.y());
}

double distance(const PointH& z, const PointH& w) {
    double dx = z.x() - w.x(), dy = z.y() - w.y();
    // 2 asinh(|z-w| / (2 sqrt(y y'))) avoids cancellation near the diagonal.
    double d = 2 * std::asinh(std::sqrt((dx * dx + dy * dy) / (4 * z.y() * w.y())));
    if (d > max_distance) fail(ErrorKind::range, "distance exceeds the supported range");
    return d;
}

PointH mobius_apply(const MobiusReal& g, const PointH& z) {
    double x = z.x(), y = z.y();
    double cx = g.c() * x + g.d();
    double cy = g.c() * y;
    double den = cx * cx + cy * cy;
    double re = ((g.a() * x + g.b()) * cx + g.a() * g.c() * y * y) / den;
    double im = y / den;
    if (!std::isfinite(re) || !std::isfinite(im) || !(im > 0))
        fail(ErrorKind::range, "Mobius image overflows double precision");
    return {re, im};
}

PointH sphere_point(const PointH& z, double r, double theta) {
    if (r < 0) fail(ErrorKind::domain, "sphere radius must be non-negative");
    // Image of i under [[e^{r/2} sin, e^{-r/2} cos], [-e^{r/2} cos, e^{-r/2} sin]], moved to z.
    double c = std::cos(theta), s = std::sin(theta);
    double ep = std::exp(r), em = std::exp(-r);
    double den = ep * c * c + em * s * s;
    double re = s * c * (em - ep) / den;
    double im = 1 / den;
    return {z.x() + z.y() * re, z.y() * im};
}

double ball_volume(double r) {
    if (r < 0) fail(ErrorKind::domain, "ball radius must be non-negative");
    // 2 pi (cosh r - 1) = 4 pi sinh^2(r/2)
    double s = std::sinh(r / 2);
    return 4 * M_PI * s * s;
}

double inverse_ball_radius(double area) {
    if (area < 0) fail(ErrorKind::domain, "area must be non-negative");
    return 2 * std::asinh(std::sqrt(area / (4 * M_PI)));
}

double rect_measure(const Rect& rect) { return (rect.x1 - rect.x0) * (1 / rect.y0 - 1 / rect.y1); }

PointH sample_hyperbolic_measure(const Rect& rect, std::mt19937_64& rng) {
    if (!(rect.y0 > 0)) fail(ErrorKind::domain, "region must lie in the upper half-plane");
    if (!(rect.x1 > rect.x0) || !(rect.y1 > rect.y0)) fail(ErrorKind::domain, "region has zero area");
    // dx dy / y^2 = dx du with u = 1/y, so u is uniform.
    double ux = std::generate_canonical<double, 64>(rng);
    double uu = std::generate_canonical<double, 64>(rng);
    double x = rect.x0 + (rect.x1 - rect.x0) * ux;
    double u_lo = 1 / rect.y1, u_hi = 1 / rect.y0;
    double u = u_hi - (u_hi - u_lo) * uu;
    return {x, 1 / u};
}

} // namespace hypercut::geom
