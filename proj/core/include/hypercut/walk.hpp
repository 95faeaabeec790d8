#pragma once

#include "hypercut/geometry.hpp"
#include "hypercut/parallel.hpp"
#include "hypercut/radial_grid.hpp"
#include "hypercut/spherical.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hypercut::walk {

// RNG stream tags; each experiment family draws from its own streams.
enum StreamTag : std::uint32_t {
    tag_walk = 1,
    tag_brownian = 2,
    tag_sde = 3,
    tag_tv = 4,
    tag_bootstrap = 5,
    tag_distances = 6,
    tag_cover = 7,
    tag_isoperimetry = 8,
    tag_sampler = 9,
};

geom::PointH step_discrete(const geom::PointH& z, double r1, Rng& rng);

// Inverse-CDF sampler for the radial heat kernel at a fixed time.
class BrownianSampler {
public:
    explicit BrownianSampler(double t, double step = 0);
    double t() const noexcept { return t_; }
    const RadialGrid& radial() const noexcept { return grid_; }
    double raw_defect() const noexcept { return defect_; }
    double sample_radius(Rng& rng) const;

private:
    double t_;
    RadialGrid grid_;
    double defect_;
};

geom::PointH brownian_jump(const geom::PointH& z, const BrownianSampler& sampler, Rng& rng);

// Euler scheme for dx = sqrt2 y dW1, d ln y = sqrt2 dW2 - dt (generator y^2 (dxx + dyy)).
geom::PointH brownian_sde(const geom::PointH& z, double t, double dt, Rng& rng);

struct WalkConfig {
    double r1 = 1.0;      // step length (discrete walk)
    double t = 0.0;       // jump time (Brownian walk when > 0)
    int k = 0;
    std::size_t n_walkers = 1;
    std::uint64_t seed = 1;
    geom::PointH z0 = geom::PointH::i();
    unsigned workers = 1;
    std::size_t trajectory_walkers = 0; // record full paths of the first walkers
};

struct StepAggregate {
    double mean_log_y = 0, var_log_y = 0;
    double mean_dist = 0, var_dist = 0;
    double mean_x2 = 0;
};

struct TrajectoryPoint {
    std::size_t walker;
    int step;
    double x, y;
};

struct WalkStats {
    std::size_t n_walkers = 0;
    int k = 0;
    std::vector<StepAggregate> per_step; // steps 0..k
    // values at the final step, in walker order
    std::vector<double> log_y, x, dist;
    std::vector<double> dist_quantiles; // 5, 25, 50, 75, 95 %
    std::size_t support_violations = 0; // final distance above k r1
    std::vector<TrajectoryPoint> trajectories;
};

WalkStats walk_discrete(const WalkConfig& cfg);

struct CltReport {
    bool skipped = false;
    std::string notice;
    double alpha = 0, sigma2 = 0;
    double mean_drift = 0, drift_tolerance = 0; // mean of -ln y_k / k vs alpha r1
    double variance = 0, variance_rel_error = 0; // var of ln y_k / (r1 sqrt k) vs sigma2
    double ad_statistic = 0;
    bool drift_ok = false, variance_ok = false, normal_ok = false, pass = false;
};

CltReport clt_check(const WalkStats& stats, double r1);

struct TailFamily {
    std::string name;
    std::vector<double> lambda, prob;
    std::vector<double> censored; // lambdas with zero count
    double slope = 0, r2 = 0, c = 0;
    bool pass = false;
};

struct TailReport {
    std::vector<TailFamily> families; // log_y, x2, distance
    bool pass = false;
};

TailReport tail_checks(const WalkStats& stats, double r1, const std::vector<double>& lambda_grid);

} // namespace hypercut::walk
