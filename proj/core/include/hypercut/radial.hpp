#pragma once

#include "hypercut/radial_grid.hpp"

#include <functional>
#include <vector>

namespace hypercut::spectral {

// CDF of the distance after two steps of length r1: acos((cosh^2 r1 - cosh r) / sinh^2 r1) / pi.
double mixture2_cdf(double r, double r1);

// P(new radius <= rho | current radius r, step r1, uniform direction).
double step_cdf(double rho, double r, double r1);

// Law of the distance after k >= 2 steps of length r1 (grid step 0 selects the default).
RadialGrid radial_mixture(int k, double r1, double step = 0, unsigned sub_nodes = 4);

// Law of |first + second| for independent radial laws a, b composed by a uniformly
// rotated step, discretized on a grid with the given step.
RadialGrid convolve(const RadialGrid& a, const RadialGrid& b, double step, unsigned sub_nodes = 2);

// One step of fixed length r1 applied to a radial law.
RadialGrid convolve_step(const RadialGrid& a, double r1, double step, unsigned sub_nodes = 4);

// Exact radial density of Brownian motion at time t (generator the Laplace-Beltrami operator).
double heat_density(double t, double r);

struct HeatKernel {
    RadialGrid grid;
    double raw_defect; // integral before renormalization, minus 1
};

HeatKernel heat_radial_density(double t, double step = 0);
double heat_r_max(double t);

// Tail mass of a radial law outside |r - center| < width.
double two_sided_tail(const RadialGrid& g, double center, double width);

// Helgason transform of a radial function F on [0, R]: 2 pi int F(r) phi(s, r) sinh r dr.
double helgason_function(const std::function<double(double)>& F, double R, double s);

// Helgason transform of a radial probability measure: sum over cells of mass * phi(s, mid).
double helgason_measure(const RadialGrid& m, double s);

// phi(s_j, cell midpoints) for grids starting at 0 with a common step.
class PhiTable {
public:
    PhiTable(std::vector<double> s_grid, double step, double r_max);
    const std::vector<double>& s_grid() const noexcept { return s_; }
    std::vector<double> transform(const RadialGrid& m) const;

private:
    std::vector<double> s_;
    double h_;
    std::size_t n_;
    std::vector<double> table_; // [cell * s_count + j]
};

struct PlancherelReport {
    double space_energy;    // int |f|^2 dmu
    double spectral_energy; // (1/2pi) int_0^smax |fhat|^2 s tanh(pi s) ds
    double ratio;
    double truncation;      // |fhat(s_max)| relative to |fhat(0)|
};

PlancherelReport plancherel_check(const std::function<double(double)>& F, double R, double s_max);

} // namespace hypercut::spectral
