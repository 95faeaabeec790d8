#include "hypercut/error.hpp"
#include "hypercut/spherical.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/ellint_1.hpp>
#include <doctest.h>

#include <cmath>

using namespace hypercut;
using namespace hypercut::spectral;

namespace {

// Laplace integral P_{-1/2+nu}(cosh r) = (1/pi) int_0^pi (cosh r + sinh r cos t)^{-1/2+nu} dt,
// with nu = i s (real part taken) or nu = s' real.
double laplace_principal(double s, double r) {
    auto f = [&](double t) {
        double w = std::cosh(r) + std::sinh(r) * std::cos(t);
        return std::cos(s * std::log(w)) / std::sqrt(w);
    };
    double err = 0;
    double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, M_PI, 12, 1e-12, &err);
    return v / M_PI;
}

double laplace_complementary(double sp, double r) {
    auto f = [&](double t) { return std::pow(std::cosh(r) + std::sinh(r) * std::cos(t), -0.5 + sp); };
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, M_PI, 12, 1e-12) / M_PI;
}

} // namespace

TEST_CASE("principal series agrees with the Laplace integral") {
    for (double r : {0.1, 0.5, 1.0, 2.0, 4.0})
        for (double s : {0.0, 0.3, 1.0, 3.0, 7.5})
            CHECK(spherical_principal(s, r) == doctest::Approx(laplace_principal(s, r)).epsilon(1e-8).scale(1));
}

TEST_CASE("s = 0 agrees with the complete elliptic integral") {
    for (double r : {0.2, 1.0, 3.0, 6.0}) {
        double oracle = 2 / (M_PI * std::cosh(r / 2)) * boost::math::ellint_1(std::tanh(r / 2));
        CHECK(spherical_principal(0, r) == doctest::Approx(oracle).epsilon(1e-9));
    }
}

TEST_CASE("spherical function basics") {
    CHECK(spherical_principal(3.0, 0.0) == 1.0);
    CHECK(spherical_principal(2.0, 1.3) == doctest::Approx(spherical_principal(-2.0, 1.3)));
    CHECK(spherical_complementary(inf, 5.0) == 1.0);
    CHECK_THROWS_AS(spherical_principal(1.0, -1.0), Error);
}

TEST_CASE("complementary series agrees with the Laplace integral") {
    for (double p : {2.5, 3.0, 4.0, 8.0})
        for (double r : {0.5, 2.0, 6.0}) {
            double sp = 0.5 - 1 / p;
            CHECK(spherical_complementary(p, r) == doctest::Approx(laplace_complementary(sp, r)).epsilon(1e-9));
        }
}

TEST_CASE("p and lambda dictionary") {
    CHECK(p_to_lambda(2) == doctest::Approx(0.25));
    CHECK(p_to_lambda(inf) == doctest::Approx(0.0));
    for (double p : {2.1, 2.5, 3.0, 10.0, 1000.0}) CHECK(lambda_to_p(p_to_lambda(p)) == doctest::Approx(p).epsilon(1e-10));
    CHECK(lambda_to_p(0.25) == doctest::Approx(2.0));
    CHECK_THROWS_AS(lambda_to_p(0.3), Error);
    CHECK(SphericalParam::from_p(4).kind == SeriesKind::complementary);
    CHECK(SphericalParam::from_p(4).value == doctest::Approx(0.25));
}

TEST_CASE("Harish-Chandra bound on a coarse grid") {
    for (double r : {0.25, 1.0, 4.0, 16.0})
        for (double s = 0; s <= 40; s += 0.5) CHECK(std::abs(spherical_principal(s, r)) <= hc_bound(r, 2) + 1e-6);
}

TEST_CASE("complementary sandwich with a fitted envelope") {
    std::vector<double> fit, check;
    for (double r = 0.5; r <= 12; r += 0.5) fit.push_back(r);
    for (double r = 0.5; r <= 12; r += 0.1) check.push_back(r);
    for (double p : {2.5, 4.0}) {
        auto f = fit_lp_envelope(p, 0.1, fit, check);
        CHECK(f.violations == 0);
        CHECK(f.constant > 0);
    }
}

TEST_CASE("decay exponent integrability") {
    auto conv = decay_exponent_check(2, 0.1);
    CHECK(conv.convergent);
    CHECK(std::isfinite(conv.total));
    CHECK(conv.rate < 0);
    CHECK_FALSE(decay_exponent_check(2, 0).convergent);
    // oracle: the p = 2 integrand (r+1)^{2.1} e^{-0.05 r}
    auto f = [](double r) { return std::pow(r + 1, 2.1) * std::exp(-0.05 * r); };
    double oracle = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, 5000.0, 30, 1e-12);
    CHECK(conv.total == doctest::Approx(oracle).epsilon(1e-6));
}

TEST_CASE("s-decay of the spherical function is bounded") {
    auto d = technical_s_decay(1.0, 0.5, 25.0);
    CHECK(d.bounded);
    CHECK(d.tail_sup > 0);
}

TEST_CASE("CLT constants") {
    for (double r1 : {0.5, 1.0, 2.0, 5.0}) {
        auto c = clt_constants(r1);
        CHECK(c.alpha == doctest::Approx(2 / r1 * std::log(std::cosh(r1 / 2))).epsilon(1e-10));
        CHECK(c.alpha > 0);
        CHECK(c.alpha < 1);
        CHECK(c.sigma2 <= 4);
    }
    CHECK(clt_constants(1.0).alpha == doctest::Approx(0.2402290139).epsilon(1e-9));
    CHECK(clt_constants(1.0).sigma2 == doctest::Approx(0.4523727949).epsilon(1e-9));
}
