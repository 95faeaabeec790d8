#include "hypercut/torus.hpp"

#include "hypercut/error.hpp"

#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <sstream>

namespace hypercut::torus {

namespace {

constexpr std::size_t max_terms = 10000000;

void check(const TorusConfig& cfg) {
    if (!(cfg.lambda > 0) || !(cfg.t > 0) || !std::isfinite(cfg.lambda) || !std::isfinite(cfg.t))
        fail(ErrorKind::domain, "torus needs lambda > 0 and t > 0");
    if (!(cfg.tail_tol > 0)) fail(ErrorKind::domain, "tail tolerance must be positive");
}

// Smallest M with 2 sum_{m > M} e^{-a m^2} below tol, using the geometric bound
// sum_{m > M} e^{-a m^2} <= e^{-a (M+1)^2} / (1 - e^{-a (2M+3)}).
std::size_t fourier_cutoff(double a, double tol, double* tail) {
    for (std::size_t M = 0; M < max_terms; M = M < 16 ? M + 1 : M + M / 4) {
        double m1 = double(M + 1);
        double bound = 2 * std::exp(-a * m1 * m1) / -std::expm1(-a * (2 * m1 + 1));
        if (bound < tol) {
            *tail = bound;
            return M;
        }
    }
    fail(ErrorKind::capacity, "Fourier series needs more than 10^7 terms");
}

// Smallest N with the images |x + n| >= N (x in [0,1)) summing below tol.
std::size_t theta_cutoff(double var, double tol, double* tail) {
    const double c = 1 / std::sqrt(2 * M_PI * var);
    for (std::size_t N = 1; N < max_terms; N = N < 16 ? N + 1 : N + N / 4) {
        double n = double(N);
        double bound = 2 * c * std::exp(-n * n / (2 * var)) / -std::expm1(-(2 * n + 1) / (2 * var));
        if (bound < tol) {
            *tail = bound;
            return N;
        }
    }
    fail(ErrorKind::capacity, "theta series needs more than 10^7 terms");
}

double fourier_excess(double a, std::size_t M, double x) {
    double s = 0;
    for (std::size_t m = M; m >= 1; --m) s += std::exp(-a * double(m * m)) * std::cos(2 * M_PI * double(m) * x);
    return 2 * s;
}

double theta_sum(double var, std::size_t N, double x) {
    const double c = 1 / std::sqrt(2 * M_PI * var);
    double s = 0;
    for (long n = -long(N); n <= long(N); ++n) {
        double u = x + double(n);
        s += std::exp(-u * u / (2 * var));
    }
    return c * s;
}

// Gaussian mass of [lo, hi] with variance var, using the tail that avoids cancellation.
double gauss_mass(double lo, double hi, double var) {
    const double k = 1 / std::sqrt(2 * var);
    if (lo >= 0) return 0.5 * (std::erfc(lo * k) - std::erfc(hi * k));
    if (hi <= 0) return 0.5 * (std::erfc(-hi * k) - std::erfc(-lo * k));
    return 0.5 * (std::erf(hi * k) - std::erf(lo * k));
}

// Mass of [0, x] under the wrapped Gaussian, summing images n = -N..N.
double theta_mass(double var, std::size_t N, double x) {
    double s = 0;
    for (std::size_t n = N; n >= 1; --n) {
        double d = double(n);
        s += gauss_mass(d, d + x, var) + gauss_mass(-d, -d + x, var);
    }
    return s + gauss_mass(0, x, var);
}

double wrap(double x) {
    double w = x - std::floor(x);
    return w >= 1 ? 0 : w;
}

} // namespace

double theta_variance(const TorusConfig& cfg) {
    check(cfg);
    return cfg.t / (2 * M_PI * M_PI * cfg.lambda);
}

TorusDensity torus_density(const TorusConfig& cfg, double x) {
    check(cfg);
    if (!std::isfinite(x)) fail(ErrorKind::domain, "x must be finite");
    x = wrap(x);
    TorusDensity d;
    const double a = cfg.t / cfg.lambda, var = theta_variance(cfg);
    d.fourier_terms = fourier_cutoff(a, cfg.tail_tol, &d.fourier_tail);
    d.theta_terms = theta_cutoff(var, cfg.tail_tol, &d.theta_tail);
    d.fourier = 1 + fourier_excess(a, d.fourier_terms, x);
    d.theta = theta_sum(var, d.theta_terms, x);
    return d;
}

double torus_excess(const TorusConfig& cfg, double x) {
    check(cfg);
    x = wrap(x);
    const double a = cfg.t / cfg.lambda;
    double tail = 0;
    if (a >= 0.5) return fourier_excess(a, fourier_cutoff(a, cfg.tail_tol, &tail), x);
    double var = theta_variance(cfg);
    return theta_sum(var, theta_cutoff(var, cfg.tail_tol, &tail), x) - 1;
}

double torus_l1_series(const TorusConfig& cfg, double root) {
    check(cfg);
    const double a = cfg.t / cfg.lambda;
    double tail = 0;
    std::size_t M = fourier_cutoff(a, 1e-17, &tail);
    double s = 0;
    for (std::size_t m = M; m >= 1; --m)
        s += std::exp(-a * double(m * m)) * std::sin(2 * M_PI * double(m) * root) / (M_PI * double(m));
    return 4 * s;
}

TorusL1 torus_l1(const TorusConfig& cfg) {
    check(cfg);
    const double a = cfg.t / cfg.lambda;
    TorusL1 out;
    auto f = [&](double x) { return torus_excess(cfg, x); };
    // the kernel decreases on [0, 1/2], so p - 1 changes sign once there
    double f0 = f(0), fh = f(0.5);
    if (!(f0 > 0 && fh < 0)) fail(ErrorKind::numeric, "density does not cross 1 on [0, 1/2]");
    boost::uintmax_t iters = 200;
    auto tol = [](double l, double r) { return std::abs(r - l) <= 1e-15; };
    auto br = boost::math::tools::toms748_solve(f, 0.0, 0.5, f0, fh, tol, iters);
    out.root = 0.5 * (br.first + br.second);
    // p - 1 integrates to zero over [0, 1/2], so the L1 distance is 4 (P(x*) - x*) with P the kernel's mass on [0, x*]
    if (a >= 0.5) {
        double tail = 0;
        fourier_cutoff(a, 1e-17, &tail);
        out.l1 = torus_l1_series(cfg, out.root);
        out.error = 4 * tail;
    } else {
        const double var = theta_variance(cfg);
        double tail = 0;
        std::size_t N = theta_cutoff(var, 1e-17, &tail) + 1;
        out.l1 = 4 * (theta_mass(var, N, out.root) - out.root);
        out.error = 4 * tail + 1e-15;
    }
    out.lower = std::exp(-a);
    out.upper = std::sqrt(2 / -std::expm1(-2 * a)) * std::exp(-a);
    out.lower_margin = out.l1 - out.lower;
    out.upper_margin = out.upper - out.l1;
    double tail = 0;
    std::size_t M = fourier_cutoff(2 * a, 1e-17, &tail);
    double s = 0;
    for (std::size_t m = M; m >= 1; --m) s += std::exp(-2 * a * double(m * m));
    out.l2 = std::sqrt(2 * s);
    return out;
}

NoCutoffProfile no_cutoff_profile(const std::vector<double>& lambda_grid, const std::vector<double>& T_grid) {
    if (lambda_grid.empty() || T_grid.empty()) fail(ErrorKind::domain, "grids must be non-empty");
    NoCutoffProfile out;
    out.c1 = INFINITY;
    for (double lambda : lambda_grid) {
        for (double T : T_grid) {
            if (!(lambda > 0) || !(T > 0)) fail(ErrorKind::domain, "grids must be positive");
            NoCutoffRow row;
            row.lambda = lambda;
            row.T = T;
            // the sandwich pins t / lambda between T and T + ln sqrt(2 / (1 - e^{-2T}))
            row.bracket_lo = T;
            row.bracket_hi = T + 0.5 * std::log(2 / -std::expm1(-2 * T));
            const double target = std::exp(-T);
            auto g = [&](double a) { return torus_l1({lambda, a * lambda}).l1 - target; };
            double lo = row.bracket_lo, hi = row.bracket_hi;
            double glo = g(lo), ghi = g(hi);
            if (!(glo > 0 && ghi < 0)) {
                std::ostringstream os;
                os << "bisection bracket failed at lambda=" << lambda << " T=" << T;
                fail(ErrorKind::range, os.str());
            }
            boost::uintmax_t iters = 200;
            auto tol = [](double l, double r) { return std::abs(r - l) <= 1e-12 * std::max(1.0, std::abs(l)); };
            auto br = boost::math::tools::toms748_solve(g, lo, hi, glo, ghi, tol, iters);
            double a = 0.5 * (br.first + br.second);
            row.t = a * lambda;
            row.ratio = a / T;
            out.c1 = std::min(out.c1, row.ratio);
            out.c2 = std::max(out.c2, row.ratio);
            out.rows.push_back(row);
        }
    }
    out.spread = out.c2 / out.c1;
    return out;
}

std::vector<double> torus_l1_profile(double lambda, const std::vector<double>& times) {
    std::vector<double> out;
    out.reserve(times.size());
    for (double t : times) out.push_back(t > 0 ? torus_l1({lambda, t}).l1 : 2.0);
    return out;
}

} // namespace hypercut::torus
