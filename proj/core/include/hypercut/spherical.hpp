#pragma once

#include <limits>
#include <vector>

namespace hypercut::spectral {

enum class SeriesKind { principal, complementary, trivial };

// Unitary-dual parameter: 1/2 + i s (principal) or 1/2 + s' (complementary, |s'| < 1/2).
struct SphericalParam {
    SeriesKind kind;
    double value; // s for principal, s' for complementary

    static SphericalParam principal(double s) { return {SeriesKind::principal, s}; }
    static SphericalParam complementary(double sp);
    static SphericalParam from_p(double p);

    double lambda() const;
    double p() const;
};

constexpr double inf = std::numeric_limits<double>::infinity();

// phi_{1/2+is}(r) with the endpoint singularity removed by 1 - x = u^2.
double spherical_principal(double s, double r);
// phi at p (s' = 1/2 - 1/p); p = inf gives the constant function.
double spherical_complementary(double p, double r);
double spherical(const SphericalParam& param, double r);

// Quadrature target for spherical function values.
constexpr double spherical_abs_tol = 1e-8;

double p_to_lambda(double p);
double lambda_to_p(double lambda);

double hc_bound(double r, double p);

// Lower envelope e^{-r (1/2 - |s'| (1 - eps))} for the complementary series.
double lp_envelope(double p, double r, double eps);

struct EnvelopeFit {
    double constant;     // largest C with phi >= C * envelope on the fitting grid
    std::size_t violations; // check-grid points with phi < C * envelope or phi > hc_bound
    double worst_lower_ratio;
};

EnvelopeFit fit_lp_envelope(double p, double eps, const std::vector<double>& fit_grid,
                            const std::vector<double>& check_grid);

struct DecayCheck {
    double head;   // quadrature on [0, 200]
    double tail;   // analytic tail beyond 200 (inf when divergent)
    double total;
    double rate;   // fitted slope of log integrand on [150, 200]
    bool convergent;
};

// Integrability of e^r hc_bound(r, p)^{p + eps}.
DecayCheck decay_exponent_check(double p, double eps);

struct SDecay {
    double head_sup; // sup of |phi| sqrt(s) over s in [1, 50]
    double tail_sup; // sup over s in [500, 1000]
    bool bounded;    // tail_sup <= 2 head_sup
};

SDecay technical_s_decay(double r, double head_step = 0.25, double tail_step = 5.0);

struct CltConstants {
    double r1, alpha, sigma2;
};

CltConstants clt_constants(double r1);

} // namespace hypercut::spectral
