#include "hypercut/walk.hpp"

#include "hypercut/error.hpp"
#include "hypercut/radial.hpp"
#include "hypercut/stats.hpp"

#include <algorithm>
#include <cmath>

namespace hypercut::walk {

geom::PointH step_discrete(const geom::PointH& z, double r1, Rng& rng) {
    if (!(r1 >= 0)) fail(ErrorKind::domain, "step length must be non-negative");
    return geom::sphere_point(z, r1, M_PI * uniform01(rng));
}

BrownianSampler::BrownianSampler(double t, double step) : t_(t) {
    auto hk = spectral::heat_radial_density(t, step);
    grid_ = std::move(hk.grid);
    defect_ = hk.raw_defect;
}

double BrownianSampler::sample_radius(Rng& rng) const { return grid_.quantile(uniform01(rng)); }

geom::PointH brownian_jump(const geom::PointH& z, const BrownianSampler& sampler, Rng& rng) {
    double r = sampler.sample_radius(rng);
    return geom::sphere_point(z, r, M_PI * uniform01(rng));
}

geom::PointH brownian_sde(const geom::PointH& z, double t, double dt, Rng& rng) {
    if (!(t >= 0) || !(dt > 0)) fail(ErrorKind::domain, "SDE needs t >= 0 and dt > 0");
    std::normal_distribution<double> gauss;
    double x = z.x(), ly = std::log(z.y());
    auto steps = std::size_t(std::ceil(t / dt - 1e-9));
    double h = steps ? t / double(steps) : 0.0;
    double sh = std::sqrt(2 * h);
    for (std::size_t i = 0; i < steps; ++i) {
        double y = std::exp(ly);
        x += sh * y * gauss(rng);
        ly += sh * gauss(rng) - h;
    }
    return {x, std::exp(ly)};
}

namespace {

struct BlockSums {
    std::vector<double> ly, ly2, d, d2, x2;
    std::vector<TrajectoryPoint> traj;
    std::size_t violations = 0;
};

} // namespace

WalkStats walk_discrete(const WalkConfig& cfg) {
    if (cfg.k < 0 || cfg.n_walkers == 0) fail(ErrorKind::domain, "walk needs k >= 0 and at least one walker");
    const bool brownian = cfg.t > 0;
    if (!brownian && !(cfg.r1 >= 0)) fail(ErrorKind::domain, "step length must be non-negative");
    std::optional<BrownianSampler> sampler;
    if (brownian) sampler.emplace(cfg.t);

    const std::size_t steps = std::size_t(cfg.k) + 1;
    const std::size_t nb = block_count(cfg.n_walkers);
    std::vector<BlockSums> blocks(nb);
    WalkStats out;
    out.n_walkers = cfg.n_walkers;
    out.k = cfg.k;
    out.log_y.resize(cfg.n_walkers);
    out.x.resize(cfg.n_walkers);
    out.dist.resize(cfg.n_walkers);
    const double reach = brownian ? INFINITY : cfg.k * cfg.r1 + 1e-9;

    for_each_block(cfg.n_walkers, block_size, cfg.workers, [&](std::size_t b, std::size_t lo, std::size_t hi) {
        Rng rng = block_rng(cfg.seed, brownian ? tag_brownian : tag_walk, b);
        BlockSums& s = blocks[b];
        for (auto* v : {&s.ly, &s.ly2, &s.d, &s.d2, &s.x2}) v->assign(steps, 0.0);
        for (std::size_t w = lo; w < hi; ++w) {
            geom::PointH z = cfg.z0;
            for (std::size_t j = 0; j < steps; ++j) {
                if (j > 0) z = brownian ? brownian_jump(z, *sampler, rng) : step_discrete(z, cfg.r1, rng);
                double ly = std::log(z.y());
                double d = geom::distance(z, cfg.z0);
                double dx = z.x() - cfg.z0.x();
                s.ly[j] += ly;
                s.ly2[j] += ly * ly;
                s.d[j] += d;
                s.d2[j] += d * d;
                s.x2[j] += dx * dx;
                if (w < cfg.trajectory_walkers) s.traj.push_back({w, int(j), z.x(), z.y()});
            }
            out.log_y[w] = std::log(z.y());
            out.x[w] = z.x() - cfg.z0.x();
            out.dist[w] = geom::distance(z, cfg.z0);
            if (out.dist[w] > reach) ++s.violations;
        }
    });

    out.per_step.resize(steps);
    const double n = double(cfg.n_walkers);
    for (std::size_t j = 0; j < steps; ++j) {
        double ly = 0, ly2 = 0, d = 0, d2 = 0, x2 = 0;
        for (const auto& s : blocks) {
            ly += s.ly[j];
            ly2 += s.ly2[j];
            d += s.d[j];
            d2 += s.d2[j];
            x2 += s.x2[j];
        }
        auto& a = out.per_step[j];
        a.mean_log_y = ly / n;
        a.mean_dist = d / n;
        a.mean_x2 = x2 / n;
        double denom = n > 1 ? n - 1 : 1;
        a.var_log_y = std::max(0.0, (ly2 - n * a.mean_log_y * a.mean_log_y) / denom);
        a.var_dist = std::max(0.0, (d2 - n * a.mean_dist * a.mean_dist) / denom);
    }
    for (auto& s : blocks) {
        out.support_violations += s.violations;
        out.trajectories.insert(out.trajectories.end(), s.traj.begin(), s.traj.end());
    }
    std::vector<double> sorted = out.dist;
    std::sort(sorted.begin(), sorted.end());
    for (double q : {0.05, 0.25, 0.5, 0.75, 0.95}) {
        auto idx = std::min(sorted.size() - 1, std::size_t(q * double(sorted.size())));
        out.dist_quantiles.push_back(sorted[idx]);
    }
    return out;
}

CltReport clt_check(const WalkStats& stats, double r1) {
    CltReport rep;
    if (stats.k < 50 || stats.n_walkers < 10000) {
        rep.skipped = true;
        rep.notice = "insufficient data for the CLT check (need k >= 50 and n >= 10^4)";
        return rep;
    }
    auto cc = spectral::clt_constants(r1);
    rep.alpha = cc.alpha;
    rep.sigma2 = cc.sigma2;
    const double k = stats.k, n = double(stats.n_walkers);
    const double sigma = std::sqrt(cc.sigma2);
    std::vector<double> drift(stats.log_y.size()), scaled(stats.log_y.size()), z(stats.log_y.size());
    for (std::size_t i = 0; i < stats.log_y.size(); ++i) {
        double ly = stats.log_y[i];
        drift[i] = -ly / k;
        scaled[i] = ly / (r1 * std::sqrt(k));
        z[i] = (ly + cc.alpha * r1 * k) / (r1 * sigma * std::sqrt(k));
    }
    auto md = stats::moments(drift);
    auto ms = stats::moments(scaled);
    rep.mean_drift = md.mean;
    rep.drift_tolerance = 3 * sigma * r1 / std::sqrt(k * n);
    rep.drift_ok = std::abs(md.mean - cc.alpha * r1) <= rep.drift_tolerance;
    rep.variance = ms.variance;
    rep.variance_rel_error = std::abs(ms.variance - cc.sigma2) / cc.sigma2;
    rep.variance_ok = rep.variance_rel_error <= 0.05;
    rep.ad_statistic = stats::anderson_darling(z, 0.0, 1.0);
    rep.normal_ok = rep.ad_statistic < stats::anderson_darling_crit_1pct;
    rep.pass = rep.drift_ok && rep.variance_ok && rep.normal_ok;
    return rep;
}

TailReport tail_checks(const WalkStats& stats, double r1, const std::vector<double>& lambda_grid) {
    if (r1 < 0.05) fail(ErrorKind::domain, "tail checks refuse r1 < 0.05: constants degrade as r1 -> 0");
    if (stats.k < 1) fail(ErrorKind::domain, "tail checks need k >= 1");
    const double k = stats.k, sk = std::sqrt(k);
    const double alpha = spectral::clt_constants(r1).alpha;
    const double n = double(stats.n_walkers);
    TailReport rep;
    auto run = [&](const std::string& name, auto&& exceed) {
        TailFamily f;
        f.name = name;
        for (double lam : lambda_grid) {
            std::size_t cnt = 0;
            for (std::size_t i = 0; i < stats.log_y.size(); ++i)
                if (exceed(i, lam)) ++cnt;
            if (cnt == 0) {
                f.censored.push_back(lam);
                continue;
            }
            f.lambda.push_back(lam);
            f.prob.push_back(double(cnt) / n);
        }
        if (f.lambda.size() >= 3) {
            std::vector<double> x, y;
            for (std::size_t i = 0; i < f.lambda.size(); ++i) {
                x.push_back(f.lambda[i] * f.lambda[i]);
                y.push_back(std::log(f.prob[i]));
            }
            auto fit = stats::linear_fit(x, y);
            f.slope = fit.slope;
            f.r2 = fit.r2;
            f.c = -fit.slope;
            f.pass = fit.slope < 0 && fit.r2 >= 0.9;
        }
        rep.families.push_back(f);
    };
    run("log_y", [&](std::size_t i, double lam) { return std::abs(stats.log_y[i] + alpha * r1 * k) >= lam * r1 * sk; });
    run("x2", [&](std::size_t i, double lam) {
        // x^2 >= exp(lam r1 sqrt k), compared in logs
        double x = std::abs(stats.x[i]);
        return x > 0 && 2 * std::log(x) >= lam * r1 * sk;
    });
    run("distance", [&](std::size_t i, double lam) { return std::abs(stats.dist[i] - alpha * r1 * k) >= lam * sk; });
    rep.pass = std::all_of(rep.families.begin(), rep.families.end(), [](const TailFamily& f) { return f.pass; });
    return rep;
}

} // namespace hypercut::walk
