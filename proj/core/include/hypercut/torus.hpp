#pragma once

#include <cstddef>
#include <vector>

namespace hypercut::torus {

// Heat kernel on R / Z with Fourier coefficients exp(-t m^2 / lambda).
struct TorusConfig {
    double lambda = 1;
    double t = 1;
    double tail_tol = 1e-13; // bound on the dropped series tail
};

struct TorusDensity {
    double theta = 0, fourier = 0;
    std::size_t theta_terms = 0, fourier_terms = 0; // largest |n| and m kept
    double theta_tail = 0, fourier_tail = 0;         // tail bounds of the dropped terms
};

// Theta variance t / (2 pi^2 lambda), matching the Fourier coefficients by Poisson summation.
double theta_variance(const TorusConfig& cfg);

TorusDensity torus_density(const TorusConfig& cfg, double x);

// Density minus one, from whichever series converges faster at this (lambda, t).
double torus_excess(const TorusConfig& cfg, double x);

struct TorusL1 {
    double l1 = 0, error = 0;
    double root = 0;       // crossing p = 1 in (0, 1/2)
    double lower = 0, upper = 0;
    double lower_margin = 0, upper_margin = 0; // l1 - lower, upper - l1
    double l2 = 0;         // Parseval: sqrt(2 sum e^{-2 t m^2 / lambda})
};

TorusL1 torus_l1(const TorusConfig& cfg);

// Closed form 4 sum e^{-t m^2/lambda} sin(2 pi m x*) / (pi m) at the crossing x*.
double torus_l1_series(const TorusConfig& cfg, double root);

struct NoCutoffRow {
    double lambda = 0, T = 0, t = 0, ratio = 0; // ratio = t / (lambda T)
    double bracket_lo = 0, bracket_hi = 0;      // sandwich bracket for t / lambda
};

struct NoCutoffProfile {
    std::vector<NoCutoffRow> rows;
    double c1 = 0, c2 = 0, spread = 0; // min / max ratio and c2 / c1
};

// Time until the L1 distance drops to e^{-T}, for every (lambda, T).
NoCutoffProfile no_cutoff_profile(const std::vector<double>& lambda_grid, const std::vector<double>& T_grid);

// L1 distance at each time, for feeding the cutoff locator.
std::vector<double> torus_l1_profile(double lambda, const std::vector<double>& times);

} // namespace hypercut::torus
