#pragma once

#include "hypercut/error.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <sstream>

namespace hypercut::detail {

struct QuadResult {
    double value = 0, error = 0, l1 = 0;
};

template <class F>
QuadResult gk(F&& f, double a, double b, double tol = 1e-12, unsigned depth = 20) {
    QuadResult r;
    r.value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, depth, tol, &r.error, &r.l1);
    return r;
}

// Adaptive bisection with an absolute error target, for integrands whose value may cancel to
// far below their L1 norm (a relative target is unreachable there).
template <class F>
QuadResult gk_abs(F&& f, double a, double b, double abs_tol, unsigned depth = 12) {
    QuadResult r;
    r.value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 0, 0.0, &r.error, &r.l1);
    if (r.error <= abs_tol || depth == 0) return r;
    double m = 0.5 * (a + b);
    auto lo = gk_abs(f, a, m, abs_tol / 2, depth - 1);
    auto hi = gk_abs(f, m, b, abs_tol / 2, depth - 1);
    return {lo.value + hi.value, lo.error + hi.error, lo.l1 + hi.l1};
}

template <class F>
QuadResult gk_panels_abs(F&& f, double a, double b, unsigned panels, double abs_tol, unsigned depth = 12) {
    QuadResult out;
    if (panels < 1) panels = 1;
    double h = (b - a) / panels;
    for (unsigned k = 0; k < panels; ++k) {
        double lo = a + h * k, hi = k + 1 == panels ? b : a + h * (k + 1);
        auto r = gk_abs(f, lo, hi, abs_tol / panels, depth);
        out.value += r.value;
        out.error += r.error;
        out.l1 += r.l1;
    }
    return out;
}

inline void require_accuracy(const QuadResult& r, double abs_tol, const char* what) {
    if (!std::isfinite(r.value) || r.error > abs_tol) {
        std::ostringstream os;
        os << what << ": quadrature did not converge (error estimate " << r.error << ", target " << abs_tol << ")";
        fail(ErrorKind::numeric, os.str());
    }
}

// log(sinh x) for x > 0 without overflow.
inline double log_sinh(double x) {
    if (x > 20) return x - M_LN2 + std::log1p(-std::exp(-2 * x));
    return std::log(std::sinh(x));
}

inline double log_cosh(double x) {
    x = std::abs(x);
    return x - M_LN2 + std::log1p(std::exp(-2 * x));
}

} // namespace hypercut::detail
