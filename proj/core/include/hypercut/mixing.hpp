#pragma once

#include "hypercut/quotient.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hypercut::mixing {

// Partition of X_q into (x, u = 1/y) rectangles of the standard domain truncated at y <= Y,
// plus one cusp strip per column above Y, on every sheet. Cells clipped by the unit circle to
// less than a fifth of a full cell are merged into the cell above them.
class CellPartition {
public:
    CellPartition(const modular::CongruenceCover& cover, double Y, int n = 0);

    // Smallest n whose largest bin has measure <= mu(X) / 1000.
    static int resolution_for(const modular::CongruenceCover& cover, double Y);

    const modular::CongruenceCover& cover() const noexcept { return *cover_; }
    double Y() const noexcept { return Y_; }
    int n() const noexcept { return n_; }
    std::size_t bins_per_sheet() const noexcept { return sheet_measure_.size(); }
    std::size_t bin_count() const noexcept { return sheet_measure_.size() * cover_->order(); }
    // measure of bin b on one sheet (same on all sheets)
    double sheet_bin_measure(std::size_t b) const { return sheet_measure_[b]; }
    double bin_probability(std::size_t global) const;
    double max_bin_measure() const;
    double truncated_total() const; // sum over non-cusp bins, all sheets
    double total() const;           // mu(X)
    bool is_cusp_bin(std::size_t b) const { return b >= cusp_start_; }

    std::size_t local_bin(const geom::PointH& z) const;
    std::size_t bin(const modular::QuotientPoint& p) const;
    std::size_t bin(const geom::PointH& z, std::size_t sheet_index) const {
        return sheet_index * bins_per_sheet() + local_bin(z);
    }

    struct GridCell {
        geom::Rect rect;   // in (x, y); y1 may be infinite for cusp strips
        double measure;    // exact measure of rect intersected with the domain
        bool clipped;      // cut by the unit circle
        std::size_t bin;
    };
    const std::vector<GridCell>& grid_cells() const noexcept { return cells_; }
    std::string descriptor() const;

private:
    const modular::CongruenceCover* cover_;
    double Y_;
    int n_;
    double du_, u_lo_;
    std::vector<GridCell> cells_;     // row-major (iu, ix) then cusp strips
    std::vector<std::uint32_t> grid_bin_;
    std::vector<double> sheet_measure_;
    std::size_t cusp_start_ = 0;
};

// Exact measure of [x0,x1] x [u0,u1] in (x, u = 1/y) coordinates intersected with x^2 + y^2 >= 1.
double clipped_cell_measure(double x0, double x1, double u0, double u1);

struct TvConfig {
    modular::QuotientPoint x0{geom::PointH::i(), modular::CosetModQ::identity(1)};
    double r1 = 1.0;
    int k_max = 20;
    std::size_t n_walkers = 100000;
    std::uint64_t seed = 1;
    unsigned workers = 1;
    int resolution = 0; // 0 selects CellPartition::resolution_for
    double Y = 10.0;
    int bootstrap = 200;
    double r0 = 0.05; // injectivity-radius floor for the start point
};

struct TvProfile {
    std::vector<int> k;
    std::vector<double> tv, ci_lo, ci_hi;
    std::size_t n_walkers = 0;
    std::string partition;
    std::size_t starved_bins = 0; // expected equilibrium count below 5
    double injectivity_radius = 0;
    double plug_in_floor = 0; // expected TV of an n-sample from the uniform law
};

TvProfile tv_profile(const modular::CongruenceCover& cover, const TvConfig& cfg);

// One walk step on X_q: sphere point, reduction, and sheet update s -> delta s.
modular::QuotientPoint quotient_step(const modular::QuotientPoint& p, double r1, double theta);

struct CutoffTable {
    std::map<double, double> t_eps; // epsilon -> first crossing time
    double location = 0;            // t(1.0) speed / R
    double width = 0;               // (t(0.1) - t(1.9)) speed / sqrt(R)
    double width_over_location = 0; // (t(0.1) - t(1.9)) / t(1.0)
};

inline const std::vector<double> cutoff_eps = {1.9, 1.5, 1.0, 0.5, 0.1};

// speed = alpha r1 for the hyperbolic walk; R = R_X.
CutoffTable cutoff_locator(const std::vector<double>& times, const std::vector<double>& tv, double speed, double R);

struct DistanceSamples {
    std::vector<double> d;       // per sample; censored samples hold R_max
    std::size_t censored = 0;    // samples beyond R_max
    double truncation_factor = 1; // mu(X_trunc) / mu(X)
};

DistanceSamples sample_distances(const modular::CongruenceCover& cover, const modular::QuotientPoint& x0,
                                 std::size_t n, double R_max, double Y, std::uint64_t seed, unsigned workers);

struct DistanceHistogram {
    double R_X = 0;
    std::vector<double> gamma, frac_below, frac_above, scaled_below; // scaled = frac_below R_X^gamma
    double fitted_C = 0;      // max scaled_below over gamma > 0
    double stability = 0;     // max / min of scaled_below over gamma > 0
    std::vector<double> r, frac_within, ball_ratio, rel_error;
    double injectivity_radius = 0;
    std::size_t censored = 0;
};

DistanceHistogram distance_histogram(const modular::CongruenceCover& cover, const modular::QuotientPoint& x0,
                                     const DistanceSamples& samples, const std::vector<double>& gammas,
                                     const std::vector<double>& radii);

struct ConcentrationReport {
    double R_med = 0;
    double a = 0, slope = 0, r2 = 0;
    std::vector<double> gamma, tail;
    bool conclusive = false;
    std::optional<bool> within_R_window; // R_X <= R_med <= R_X + 3 ln R_X when R_X is given
};

constexpr std::size_t concentration_min_samples = 10000;

ConcentrationReport concentration_fit(const std::vector<double>& samples, double gamma_step = 0.1,
                                      std::optional<double> R_X = std::nullopt);

struct IsoperimetricResult {
    double c = 0, c_prime = 0, c_prime_se = 0;
    double kappa = 0, bound = 0;
    std::string verdict; // pass, fail, inconclusive, not-asserted
};

double kappa(double r, double p);

// Distance from z to the rectangle R of the upper half-plane (y1 may be infinite).
double distance_to_rect(const geom::PointH& z, const geom::Rect& R);

struct IsoConfig {
    double r = 1.0;
    double p = 2.0;
    bool p_certified = false;
    std::size_t n_mc = 10000;
    std::uint64_t seed = 1;
    unsigned workers = 1;
};

// Seed region: a union of unclipped grid cells (indices into grid_cells()) on the given sheets.
IsoperimetricResult isoperimetric_check_cells(const CellPartition& part, const std::vector<std::size_t>& cells,
                                              const std::vector<std::size_t>& sheets, const IsoConfig& cfg);

// Seed region: the ball of radius rho about x0.
IsoperimetricResult isoperimetric_check_ball(const CellPartition& part, const modular::QuotientPoint& x0,
                                             double rho, const IsoConfig& cfg);

} // namespace hypercut::mixing
