#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

namespace hypercut {

// Piecewise-constant density on a uniform partition of [r_min, r_max].
class RadialGrid {
public:
    RadialGrid() = default;
    RadialGrid(double r_min, double r_max, std::size_t n_cells, std::vector<double> values = {},
               bool probability = false);

    // Grid with step 1e-3 * max(1, r_max/10) (or the given step) covering [0, r_max].
    static RadialGrid with_step(double r_max, double step = 0);
    static double default_step(double r_max);

    double r_min() const noexcept { return r_min_; }
    double r_max() const noexcept { return r_max_; }
    std::size_t n_cells() const noexcept { return values_.size(); }
    double width() const noexcept { return h_; }
    double edge(std::size_t i) const noexcept { return r_min_ + h_ * double(i); }
    double mid(std::size_t i) const noexcept { return r_min_ + h_ * (double(i) + 0.5); }

    const std::vector<double>& values() const noexcept { return values_; }
    std::vector<double>& values() noexcept { return values_; }
    double mass(std::size_t i) const noexcept { return values_[i] * h_; }
    std::vector<double> masses() const;
    void set_masses(const std::vector<double>& m);

    double total_mass() const;
    // Rescales to unit mass and returns the pre-normalization defect (mass - 1).
    double normalize();
    bool probability() const noexcept { return probability_; }

    double cdf(double r) const;
    double quantile(double u) const;
    double mean() const;
    // Cell index of the largest density.
    std::size_t argmax() const;

    void write_csv(std::ostream& os) const;

private:
    void check() const;

    double r_min_ = 0, r_max_ = 1, h_ = 1;
    std::vector<double> values_;
    std::vector<double> cum_;
    bool probability_ = false;
    void rebuild_cdf();
};

// Supremum over grid edges of |F_a - F_b|; a and b may use different grids.
double sup_cdf_gap(const RadialGrid& a, const RadialGrid& b);

} // namespace hypercut
