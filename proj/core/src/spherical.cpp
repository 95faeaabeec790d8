#include "hypercut/spherical.hpp"

#include "hypercut/error.hpp"
#include "quad.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>

namespace hypercut::spectral {

using detail::log_cosh;
using detail::log_sinh;

SphericalParam SphericalParam::complementary(double sp) {
    if (!(std::abs(sp) < 0.5)) fail(ErrorKind::domain, "complementary parameter must satisfy |s'| < 1/2");
    return {SeriesKind::complementary, sp};
}

SphericalParam SphericalParam::from_p(double p) {
    if (std::isinf(p)) return {SeriesKind::trivial, 0.5};
    if (!(p >= 2)) fail(ErrorKind::domain, "p must be at least 2");
    return complementary(0.5 - 1.0 / p);
}

double SphericalParam::lambda() const {
    switch (kind) {
    case SeriesKind::principal: return 0.25 + value * value;
    case SeriesKind::complementary: return 0.25 - value * value;
    case SeriesKind::trivial: return 0.0;
    }
    return 0.0;
}

double SphericalParam::p() const {
    switch (kind) {
    case SeriesKind::principal: return 2.0;
    case SeriesKind::complementary: return 1.0 / (0.5 - std::abs(value));
    case SeriesKind::trivial: return inf;
    }
    return 2.0;
}

namespace {

// log of 2u / sqrt(cosh r - cosh(r(1-u^2))), using cosh r - cosh rx = 2 sinh(r(1+x)/2) sinh(r(1-x)/2).
double log_weight(double u, double r) {
    double a = r * (2 - u * u) / 2, b = r * u * u / 2;
    return std::log(2 * u) - 0.5 * (M_LN2 + log_sinh(a) + log_sinh(b));
}

unsigned oscillation_panels(double s, double r) {
    double w = std::abs(s) * r;
    return unsigned(std::clamp(std::ceil(w / 2.0), 1.0, 4096.0));
}

} // namespace

double spherical_principal(double s, double r) {
    if (!(r >= 0)) fail(ErrorKind::domain, "radius must be non-negative");
    if (r == 0) return 1.0;
    auto f = [s, r](double u) {
        if (u <= 0) return 2.0 / std::sqrt(r * std::sinh(r)) * std::cos(s * r);
        return std::exp(log_weight(u, r)) * std::cos(s * r * (1 - u * u));
    };
    const double pref = M_SQRT2 / M_PI * r;
    auto q = detail::gk_panels_abs(f, 0.0, 1.0, oscillation_panels(s, r), 1e-3 * spherical_abs_tol / pref);
    q.value *= pref;
    q.error *= pref;
    detail::require_accuracy(q, spherical_abs_tol, "spherical_principal");
    return q.value;
}

double spherical_complementary(double p, double r) {
    if (!(r >= 0)) fail(ErrorKind::domain, "radius must be non-negative");
    if (std::isinf(p)) return 1.0;
    if (!(p >= 2)) fail(ErrorKind::domain, "p must be at least 2");
    if (r == 0) return 1.0;
    const double sp = 0.5 - 1.0 / p;
    // the integrand carries e^{s' r}; factor it out of the quadrature
    const double shift = sp * r;
    auto f = [sp, r, shift](double u) {
        double x = 1 - u * u;
        double lc = log_cosh(sp * r * x) - shift;
        if (u <= 0) return 2.0 / std::sqrt(r * std::sinh(r)) * std::exp(lc);
        return std::exp(log_weight(u, r) + lc);
    };
    auto q = detail::gk(f, 0.0, 1.0, 1e-13);
    const double log_pref = std::log(M_SQRT2 / M_PI * r) + shift;
    double value = std::exp(std::log(q.value) + log_pref);
    q.error *= std::exp(log_pref);
    q.value = value;
    detail::require_accuracy(q, spherical_abs_tol, "spherical_complementary");
    return value;
}

double spherical(const SphericalParam& param, double r) {
    switch (param.kind) {
    case SeriesKind::principal: return spherical_principal(param.value, r);
    case SeriesKind::complementary: return spherical_complementary(param.p(), r);
    case SeriesKind::trivial: return 1.0;
    }
    return 1.0;
}

double p_to_lambda(double p) {
    if (std::isinf(p)) return 0.0;
    if (!(p >= 2)) fail(ErrorKind::domain, "p must be at least 2");
    double t = 0.5 - 1.0 / p;
    return 0.25 - t * t;
}

double lambda_to_p(double lambda) {
    if (!(lambda >= 0) || lambda > 0.25) fail(ErrorKind::domain, "lambda must lie in (0, 1/4] to invert");
    if (lambda == 0) fail(ErrorKind::domain, "lambda must lie in (0, 1/4] to invert");
    // 1/2 - 1/p = sqrt(1/4 - lambda), written as lambda / (1/2 + sqrt(1/4 - lambda)) to keep precision
    double root = std::sqrt(0.25 - lambda);
    double inv_p = lambda / (0.5 + root);
    return 1.0 / inv_p;
}

double hc_bound(double r, double p) {
    if (!(r >= 0)) fail(ErrorKind::domain, "radius must be non-negative");
    if (!(p >= 2)) fail(ErrorKind::domain, "p must be at least 2");
    if (std::isinf(p)) return r + 1;
    return (r + 1) * std::exp(-r / p);
}

double lp_envelope(double p, double r, double eps) {
    double sp = std::isinf(p) ? 0.5 : 0.5 - 1.0 / p;
    return std::exp(-r * (0.5 - sp * (1 - eps)));
}

EnvelopeFit fit_lp_envelope(double p, double eps, const std::vector<double>& fit_grid,
                            const std::vector<double>& check_grid) {
    if (fit_grid.empty()) fail(ErrorKind::domain, "envelope fit needs grid points");
    EnvelopeFit out{inf, 0, inf};
    for (double r : fit_grid) out.constant = std::min(out.constant, spherical_complementary(p, r) / lp_envelope(p, r, eps));
    for (double r : check_grid) {
        double phi = spherical_complementary(p, r);
        double ratio = phi / (out.constant * lp_envelope(p, r, eps));
        out.worst_lower_ratio = std::min(out.worst_lower_ratio, ratio);
        bool low = phi < out.constant * lp_envelope(p, r, eps) * (1 - 1e-12);
        bool high = phi > hc_bound(r, p) * (1 + 1e-6);
        if (low || high) ++out.violations;
    }
    return out;
}

DecayCheck decay_exponent_check(double p, double eps) {
    if (!(p >= 2) || std::isinf(p)) fail(ErrorKind::domain, "p must be finite and at least 2");
    if (!(eps >= 0)) fail(ErrorKind::domain, "eps must be non-negative");
    const double a = p + eps, b = eps / p;
    auto logf = [a, b](double r) { return a * std::log1p(r) - b * r; };
    auto f = [&](double r) { return std::exp(logf(r)); };
    DecayCheck out{};
    out.head = detail::gk(f, 0.0, 200.0, 1e-12, 25).value;
    out.rate = (logf(200.0) - logf(150.0)) / 50.0;
    if (b > 0) {
        // int_200^inf (r+1)^a e^{-b r} dr = e^b b^{-(a+1)} Gamma(a+1, 201 b)
        out.tail = std::exp(b - (a + 1) * std::log(b)) * boost::math::tgamma(a + 1, 201.0 * b);
    } else {
        out.tail = inf;
    }
    out.total = out.head + out.tail;
    out.convergent = b > 0 && out.rate < 0 && std::isfinite(out.total);
    return out;
}

SDecay technical_s_decay(double r, double head_step, double tail_step) {
    if (!(r > 0)) fail(ErrorKind::domain, "technical decay check needs r > 0");
    SDecay out{0, 0, false};
    for (double s = 1; s <= 50 + 1e-9; s += head_step)
        out.head_sup = std::max(out.head_sup, std::abs(spherical_principal(s, r)) * std::sqrt(s));
    for (double s = 500; s <= 1000 + 1e-9; s += tail_step)
        out.tail_sup = std::max(out.tail_sup, std::abs(spherical_principal(s, r)) * std::sqrt(s));
    out.bounded = out.tail_sup <= 2 * out.head_sup;
    return out;
}

CltConstants clt_constants(double r1) {
    if (!(r1 > 0)) fail(ErrorKind::domain, "step length must be positive");
    // ln(e^r cos^2 + e^{-r} sin^2) / r = 1 + ln(cos^2 + e^{-2r} sin^2) / r; symmetric about pi/2.
    // With s = pi/2 - t the variation sits in s ~ e^{-r}, so the range is cut into dyadic panels from there.
    const double a = std::exp(-r1);
    auto Y = [r1, a](double s) {
        double c = std::cos(s), sn = std::sin(s);
        return 1.0 + 2.0 * std::log(std::hypot(sn, a * c)) / r1;
    };
    // mean of ln(cos^2 + a^2 sin^2) over a quarter period is 2 ln((1+a)/2)
    double alpha = 1.0 + 2.0 * std::log1p(a) / r1 - 2.0 * M_LN2 / r1;
    auto v = [&](double s) {
        double d = Y(s) - alpha;
        return d * d;
    };
    std::vector<double> cuts{0.0};
    for (double c = a; c < M_PI / 2; c *= 2) cuts.push_back(c);
    cuts.push_back(M_PI / 2);
    double sum = 0, err = 0;
    const double panel_tol = 1e-11 / double(cuts.size());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        auto q = detail::gk_abs(v, cuts[i], cuts[i + 1], panel_tol, 12);
        sum += q.value;
        err += q.error;
    }
    double sigma2 = sum / (M_PI / 2);
    if (err / (M_PI / 2) > 1e-10) fail(ErrorKind::numeric, "CLT constant quadrature did not reach 1e-10");
    return {r1, alpha, sigma2};
}

} // namespace hypercut::spectral
