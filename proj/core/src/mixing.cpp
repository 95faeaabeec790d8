#include "hypercut/mixing.hpp"

#include "hypercut/error.hpp"
#include "hypercut/stats.hpp"
#include "hypercut/walk.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>

namespace hypercut::mixing {

using modular::CosetModQ;
using modular::QuotientPoint;

namespace {

double arc_abscissa(double u) { return u > 1 ? std::sqrt(1 - 1 / (u * u)) : 0.0; }

// int_0^x (clamp(g, u0, u1) - u0) dt with g(t) = (1 - t^2)^{-1/2}, for 0 <= x <= 1/2
double half_primitive(double x, double u0, double u1) {
    double A0 = arc_abscissa(u0), A1 = arc_abscissa(u1);
    if (x <= A0) return 0.0;
    if (x <= A1) return std::asin(x) - std::asin(A0) - u0 * (x - A0);
    return std::asin(A1) - std::asin(A0) - u0 * (A1 - A0) + (u1 - u0) * (x - A1);
}

double primitive(double x, double u0, double u1) {
    return x >= 0 ? half_primitive(x, u0, u1) : -half_primitive(-x, u0, u1);
}

} // namespace

double clipped_cell_measure(double x0, double x1, double u0, double u1) {
    if (x0 < -0.5 - 1e-12 || x1 > 0.5 + 1e-12 || !(x1 > x0) || !(u1 > u0) || u0 < 0)
        fail(ErrorKind::domain, "cell must lie in the strip |x| <= 1/2 with positive size");
    return primitive(x1, u0, u1) - primitive(x0, u0, u1);
}

CellPartition::CellPartition(const modular::CongruenceCover& cover, double Y, int n) : cover_(&cover), Y_(Y) {
    if (Y < 2) fail(ErrorKind::domain, "cusp cap Y must be at least 2");
    n_ = n > 0 ? n : resolution_for(cover, Y);
    u_lo_ = 1 / Y;
    const double u_hi = 2 / std::sqrt(3.0);
    du_ = (u_hi - u_lo_) / n_;
    const double dx = 1.0 / n_;
    const double full = dx * du_;
    grid_bin_.assign(std::size_t(n_) * std::size_t(n_), 0);
    for (int iu = 0; iu < n_; ++iu) {
        for (int ix = 0; ix < n_; ++ix) {
            double x0 = -0.5 + ix * dx, x1 = ix + 1 == n_ ? 0.5 : -0.5 + (ix + 1) * dx;
            double u0 = u_lo_ + iu * du_, u1 = iu + 1 == n_ ? u_hi : u_lo_ + (iu + 1) * du_;
            double m = clipped_cell_measure(x0, x1, u0, u1);
            GridCell c{{x0, x1, 1 / u1, 1 / u0}, m, m < full * (1 - 1e-12), 0};
            std::size_t slot = std::size_t(iu) * std::size_t(n_) + std::size_t(ix);
            if (m < 0.2 * full && iu > 0) {
                c.bin = grid_bin_[slot - std::size_t(n_)];
                sheet_measure_[c.bin] += m;
            } else {
                c.bin = sheet_measure_.size();
                sheet_measure_.push_back(m);
            }
            grid_bin_[slot] = std::uint32_t(c.bin);
            cells_.push_back(c);
        }
    }
    cusp_start_ = sheet_measure_.size();
    for (int ix = 0; ix < n_; ++ix) {
        double x0 = -0.5 + ix * dx, x1 = ix + 1 == n_ ? 0.5 : -0.5 + (ix + 1) * dx;
        GridCell c{{x0, x1, Y, INFINITY}, (x1 - x0) * u_lo_, false, sheet_measure_.size()};
        sheet_measure_.push_back(c.measure);
        cells_.push_back(c);
    }
}

int CellPartition::resolution_for(const modular::CongruenceCover& cover, double Y) {
    const double target = cover.area() / 1000;
    for (int n = 1; n <= 400; ++n) {
        CellPartition p(cover, Y, n);
        if (p.max_bin_measure() <= target) return n;
    }
    fail(ErrorKind::resolution, "no partition up to 400 x 400 reaches the mu(X)/1000 cell size");
}

double CellPartition::bin_probability(std::size_t global) const {
    return sheet_measure_[global % bins_per_sheet()] / total();
}

double CellPartition::max_bin_measure() const { return *std::max_element(sheet_measure_.begin(), sheet_measure_.end()); }

double CellPartition::truncated_total() const {
    double s = std::accumulate(sheet_measure_.begin(), sheet_measure_.begin() + std::ptrdiff_t(cusp_start_), 0.0);
    return s * double(cover_->order());
}

double CellPartition::total() const { return cover_->area(); }

std::size_t CellPartition::local_bin(const geom::PointH& z) const {
    auto ix = std::clamp(int(std::floor((z.x() + 0.5) * n_)), 0, n_ - 1);
    if (z.y() > Y_) return cusp_start_ + std::size_t(ix);
    auto iu = std::clamp(int(std::floor((1 / z.y() - u_lo_) / du_)), 0, n_ - 1);
    return grid_bin_[std::size_t(iu) * std::size_t(n_) + std::size_t(ix)];
}

std::size_t CellPartition::bin(const QuotientPoint& p) const {
    return cover_->fast_index(p.sheet) * bins_per_sheet() + local_bin(p.base);
}

std::string CellPartition::descriptor() const {
    std::ostringstream os;
    os << "q=" << cover_->q() << " n=" << n_ << " Y=" << Y_ << " bins_per_sheet=" << bins_per_sheet()
       << " sheets=" << cover_->order();
    return os.str();
}

QuotientPoint quotient_step(const QuotientPoint& p, double r1, double theta) {
    auto z = geom::sphere_point(p.base, r1, theta);
    CosetModQ s = p.sheet;
    auto red = modular::reduce_steps(z, [&s](char kind, std::int64_t n) { s = kind == 'T' ? s.left_T(n) : s.left_S(); });
    return {red, s};
}

TvProfile tv_profile(const modular::CongruenceCover& cover, const TvConfig& cfg) {
    if (cfg.k_max < 0 || cfg.n_walkers == 0) fail(ErrorKind::domain, "TV profile needs k_max >= 0 and walkers");
    if (cfg.x0.sheet.q() != cover.q()) fail(ErrorKind::domain, "start point lives on a different cover");
    CellPartition part(cover, cfg.Y, cfg.resolution);
    if (part.max_bin_measure() > cover.area() / 1000 * (1 + 1e-12)) {
        std::ostringstream os;
        os << "partition too coarse: largest bin " << part.max_bin_measure() << " > mu(X)/1000 = " << cover.area() / 1000;
        fail(ErrorKind::resolution, os.str());
    }
    TvProfile out;
    out.injectivity_radius = modular::injectivity_radius(cfg.x0, 8.0).radius;
    if (out.injectivity_radius < cfg.r0) {
        std::ostringstream os;
        os << "start point injectivity radius " << out.injectivity_radius << " is below the floor r0 = " << cfg.r0;
        fail(ErrorKind::domain, os.str());
    }
    const std::size_t bins = part.bin_count();
    const std::size_t steps = std::size_t(cfg.k_max) + 1;
    std::vector<std::uint64_t> counts(steps * bins, 0);
    std::mutex merge;
    for_each_block(cfg.n_walkers, block_size, cfg.workers, [&](std::size_t b, std::size_t lo, std::size_t hi) {
        Rng rng = block_rng(cfg.seed, walk::tag_tv, b);
        std::vector<std::uint32_t> local(steps * bins, 0);
        for (std::size_t w = lo; w < hi; ++w) {
            QuotientPoint p = cfg.x0;
            local[part.bin(p)]++;
            for (std::size_t j = 1; j < steps; ++j) {
                p = quotient_step(p, cfg.r1, M_PI * uniform01(rng));
                local[j * bins + part.bin(p)]++;
            }
        }
        std::lock_guard<std::mutex> lock(merge);
        for (std::size_t i = 0; i < local.size(); ++i) counts[i] += local[i];
    });

    const double n = double(cfg.n_walkers);
    std::vector<double> pi(bins);
    for (std::size_t b = 0; b < bins; ++b) pi[b] = part.bin_probability(b);
    for (std::size_t b = 0; b < bins; ++b) {
        if (n * pi[b] < 5) ++out.starved_bins;
        out.plug_in_floor += std::sqrt(2 * pi[b] * (1 - pi[b]) / (M_PI * n));
    }
    out.n_walkers = cfg.n_walkers;
    out.partition = part.descriptor();
    for (std::size_t j = 0; j < steps; ++j) {
        const std::uint64_t* c = &counts[j * bins];
        double tv = 0, zero_mass = 0;
        std::vector<std::pair<std::size_t, double>> support;
        for (std::size_t b = 0; b < bins; ++b) {
            tv += std::abs(double(c[b]) / n - pi[b]);
            if (c[b]) support.emplace_back(b, double(c[b]) / n);
            else zero_mass += pi[b];
        }
        out.k.push_back(int(j));
        out.tv.push_back(tv);
        if (cfg.bootstrap <= 0) {
            out.ci_lo.push_back(tv);
            out.ci_hi.push_back(tv);
            continue;
        }
        Rng rng = block_rng(cfg.seed, walk::tag_bootstrap, j);
        std::vector<double> reps;
        reps.reserve(std::size_t(cfg.bootstrap));
        for (int rep = 0; rep < cfg.bootstrap; ++rep) {
            // multinomial resample of the walkers as a chain of binomials
            std::uint64_t left = cfg.n_walkers;
            double mass_left = 1.0, tvb = zero_mass;
            for (std::size_t i = 0; i < support.size(); ++i) {
                auto [b, ph] = support[i];
                std::uint64_t draw = left;
                if (i + 1 < support.size()) {
                    double pr = std::clamp(ph / mass_left, 0.0, 1.0);
                    draw = left ? std::binomial_distribution<std::uint64_t>(left, pr)(rng) : 0;
                }
                left -= draw;
                mass_left -= ph;
                tvb += std::abs(double(draw) / n - pi[b]);
            }
            reps.push_back(tvb);
        }
        std::sort(reps.begin(), reps.end());
        auto at = [&](double q) { return reps[std::min(reps.size() - 1, std::size_t(q * double(reps.size())))]; };
        // basic bootstrap interval: the plug-in TV is biased upward, so reflect the quantiles
        out.ci_lo.push_back(std::max(0.0, 2 * tv - at(0.975)));
        out.ci_hi.push_back(std::max(0.0, 2 * tv - at(0.025)));
    }
    return out;
}

CutoffTable cutoff_locator(const std::vector<double>& times, const std::vector<double>& tv, double speed, double R) {
    if (times.size() != tv.size() || times.size() < 2) fail(ErrorKind::domain, "profile needs matching time and TV grids");
    if (!(R > 0) || !(speed > 0)) fail(ErrorKind::domain, "cutoff scale parameters must be positive");
    CutoffTable out;
    for (double eps : cutoff_eps) {
        std::size_t i = 0;
        while (i < tv.size() && tv[i] > eps) ++i;
        if (i == 0 || i == tv.size()) {
            std::ostringstream os;
            os << "transition not bracketed at epsilon " << eps;
            fail(ErrorKind::range, os.str());
        }
        double f = (tv[i - 1] - eps) / (tv[i - 1] - tv[i]);
        out.t_eps[eps] = times[i - 1] + f * (times[i] - times[i - 1]);
    }
    double t19 = out.t_eps[1.9], t10 = out.t_eps[1.0], t01 = out.t_eps[0.1];
    out.location = t10 * speed / R;
    out.width = (t01 - t19) * speed / std::sqrt(R);
    out.width_over_location = (t01 - t19) / t10;
    return out;
}

DistanceSamples sample_distances(const modular::CongruenceCover& cover, const QuotientPoint& x0, std::size_t n,
                                 double R_max, double Y, std::uint64_t seed, unsigned workers) {
    double R_X = cover.R_X();
    if (R_max < R_X + 3 * std::log(R_X)) fail(ErrorKind::domain, "R_max must be at least R_X + 3 ln R_X");
    modular::DistanceOracle oracle(x0, R_max, Y);
    DistanceSamples out;
    out.d.assign(n, R_max);
    out.truncation_factor = 1 - modular::truncated_fraction(Y);
    std::vector<std::size_t> censored(block_count(n), 0);
    for_each_block(n, block_size, workers, [&](std::size_t b, std::size_t lo, std::size_t hi) {
        Rng rng = block_rng(seed, walk::tag_distances, b);
        for (std::size_t i = lo; i < hi; ++i) {
            auto p = modular::sample_uniform_quotient(cover, Y, rng);
            auto d = oracle(p);
            if (d) out.d[i] = *d;
            else ++censored[b];
        }
    });
    out.censored = std::accumulate(censored.begin(), censored.end(), std::size_t(0));
    return out;
}

DistanceHistogram distance_histogram(const modular::CongruenceCover& cover, const QuotientPoint& x0,
                                     const DistanceSamples& samples, const std::vector<double>& gammas,
                                     const std::vector<double>& radii) {
    if (samples.d.empty()) fail(ErrorKind::domain, "no distance samples");
    DistanceHistogram h;
    h.R_X = cover.R_X();
    h.censored = samples.censored;
    const double n = double(samples.d.size()), tf = samples.truncation_factor;
    auto frac_below = [&](double r) {
        return double(std::count_if(samples.d.begin(), samples.d.end(), [r](double d) { return d < r; })) / n;
    };
    const double L = std::log(h.R_X);
    double lo = INFINITY, hi = 0;
    for (double g : gammas) {
        double below = frac_below(h.R_X - g * L) * tf;
        double above = double(std::count_if(samples.d.begin(), samples.d.end(),
                                            [&](double d) { return d > h.R_X + g * L; })) / n;
        h.gamma.push_back(g);
        h.frac_below.push_back(below);
        h.frac_above.push_back(above);
        double scaled = below * std::pow(h.R_X, g);
        h.scaled_below.push_back(scaled);
        if (g > 0 && below > 0) {
            lo = std::min(lo, scaled);
            hi = std::max(hi, scaled);
        }
    }
    h.fitted_C = hi;
    h.stability = hi > 0 ? hi / lo : INFINITY;
    for (double r : radii) {
        double f = frac_below(r) * tf;
        double ratio = geom::ball_volume(r) / cover.area();
        h.r.push_back(r);
        h.frac_within.push_back(f);
        h.ball_ratio.push_back(ratio);
        h.rel_error.push_back(std::abs(f - ratio) / ratio);
    }
    h.injectivity_radius = modular::injectivity_radius(x0, 8.0).radius;
    return h;
}

ConcentrationReport concentration_fit(const std::vector<double>& samples, double gamma_step, std::optional<double> R_X) {
    if (samples.size() < concentration_min_samples)
        fail(ErrorKind::domain, "concentration fit refused: needs at least 10^4 distance samples");
    if (!(gamma_step > 0)) fail(ErrorKind::domain, "gamma step must be positive");
    ConcentrationReport rep;
    rep.R_med = stats::median(samples);
    std::vector<double> dev(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) dev[i] = std::abs(samples[i] - rep.R_med);
    std::sort(dev.begin(), dev.end());
    const double n = double(dev.size());
    for (double g = gamma_step;; g += gamma_step) {
        auto it = std::lower_bound(dev.begin(), dev.end(), g);
        auto count = std::size_t(dev.end() - it);
        if (count < 10) break;
        rep.gamma.push_back(g);
        rep.tail.push_back(double(count) / n);
    }
    if (rep.gamma.size() >= 3) {
        std::vector<double> y;
        for (double t : rep.tail) y.push_back(std::log(t));
        auto fit = stats::linear_fit(rep.gamma, y);
        rep.slope = fit.slope;
        rep.r2 = fit.r2;
        rep.a = std::exp(-fit.slope);
        rep.conclusive = fit.r2 >= 0.7;
    }
    if (R_X) rep.within_R_window = *R_X <= rep.R_med && rep.R_med <= *R_X + 3 * std::log(*R_X);
    return rep;
}

double kappa(double r, double p) { return (r + 1) * (r + 1) * std::exp(-2 * r / p); }

double distance_to_rect(const geom::PointH& z, const geom::Rect& R) {
    double xp = std::clamp(z.x(), R.x0, R.x1);
    double dx = z.x() - xp;
    double yp = std::clamp(std::sqrt(dx * dx + z.y() * z.y()), R.y0, R.y1);
    return geom::distance(z, {xp, yp});
}

namespace {

IsoperimetricResult finish_iso(double c, std::size_t hits, std::size_t n, double tf, const IsoConfig& cfg) {
    IsoperimetricResult res;
    res.c = c;
    double frac = double(hits) / double(n);
    // cusp mass above Y is counted as outside the dilation, so c' is a lower estimate
    res.c_prime = frac * tf;
    res.c_prime_se = std::sqrt(frac * (1 - frac) / double(n)) * tf;
    res.kappa = kappa(cfg.r, cfg.p);
    res.bound = c / (res.kappa * (1 - c) + c);
    if (!cfg.p_certified) res.verdict = "not-asserted";
    else if (3 * res.c_prime_se > 0.05) res.verdict = "inconclusive";
    else res.verdict = res.c_prime >= res.bound - 3 * res.c_prime_se ? "pass" : "fail";
    return res;
}

void check_iso(const IsoConfig& cfg) {
    if (!(cfg.r >= 0) || cfg.r > 5) fail(ErrorKind::domain, "isoperimetric radius must lie in [0, 5]");
    if (!(cfg.p >= 2)) fail(ErrorKind::domain, "p must be at least 2");
    if (cfg.n_mc == 0) fail(ErrorKind::domain, "Monte-Carlo sample count must be positive");
}

} // namespace

IsoperimetricResult isoperimetric_check_cells(const CellPartition& part, const std::vector<std::size_t>& cells,
                                              const std::vector<std::size_t>& sheets, const IsoConfig& cfg) {
    check_iso(cfg);
    const auto& cover = part.cover();
    const auto& grid = part.grid_cells();
    std::set<std::size_t> cell_set(cells.begin(), cells.end()), sheet_set(sheets.begin(), sheets.end());
    if (cell_set.empty() || sheet_set.empty()) fail(ErrorKind::domain, "seed region is empty");
    for (auto s : sheet_set)
        if (s >= cover.order()) fail(ErrorKind::domain, "sheet index out of range");
    bool whole = cell_set.size() == grid.size() && sheet_set.size() == cover.order();
    if (whole) {
        IsoperimetricResult res;
        res.c = res.c_prime = res.bound = 1;
        res.kappa = kappa(cfg.r, cfg.p);
        res.verdict = "pass";
        return res;
    }
    double mu = 0;
    for (auto ci : cell_set) {
        if (ci >= grid.size()) fail(ErrorKind::domain, "cell index out of range");
        if (grid[ci].clipped || std::isinf(grid[ci].rect.y1))
            fail(ErrorKind::domain, "seed cells must be whole rectangles below the cusp cap");
        mu += grid[ci].measure;
    }
    const double c = mu * double(sheet_set.size()) / cover.area();
    if (!(c > 0 && c < 1)) fail(ErrorKind::domain, "seed region must have measure fraction in (0, 1)");

    // elements that can bring a sampled point within r of a seed cell, bucketed by residue class
    const geom::PointH i = geom::PointH::i();
    double reach = cfg.r + 2 * modular::domain_radius(part.Y());
    std::unordered_map<std::uint64_t, std::vector<modular::GroupElement>> by_class;
    for (const auto& g : modular::enumerate_ball(reach)) by_class[CosetModQ::reduce(g, cover.q()).code()].push_back(g);
    const double cosh_limit = std::cosh(cfg.r + modular::domain_radius(part.Y()));

    std::vector<std::size_t> hits(block_count(cfg.n_mc), 0);
    for_each_block(cfg.n_mc, block_size, cfg.workers, [&](std::size_t b, std::size_t lo, std::size_t hi) {
        Rng rng = block_rng(cfg.seed, walk::tag_isoperimetry, b);
        for (std::size_t k = lo; k < hi; ++k) {
            auto p = modular::sample_uniform_quotient(cover, part.Y(), rng);
            std::size_t sheet = cover.fast_index(p.sheet);
            // membership: the sampled point lies in one of the seed cells
            bool inside = false;
            if (sheet_set.count(sheet)) {
                for (auto ci : cell_set) {
                    const auto& R = grid[ci].rect;
                    if (p.base.x() >= R.x0 && p.base.x() <= R.x1 && p.base.y() >= R.y0 && p.base.y() <= R.y1) {
                        inside = true;
                        break;
                    }
                }
            }
            bool near = inside;
            for (auto sc = sheet_set.begin(); !near && sc != sheet_set.end(); ++sc) {
                auto key = (cover.elements()[*sc] * p.sheet.inverse()).code();
                auto it = by_class.find(key);
                if (it == by_class.end()) continue;
                for (const auto& g : it->second) {
                    auto gz = g.apply(p.base);
                    if (geom::cosh_distance(i, gz) > cosh_limit) continue;
                    for (auto ci : cell_set)
                        if (distance_to_rect(gz, grid[ci].rect) <= cfg.r) {
                            near = true;
                            break;
                        }
                    if (near) break;
                }
            }
            if (near) ++hits[b];
        }
    });
    std::size_t total = std::accumulate(hits.begin(), hits.end(), std::size_t(0));
    return finish_iso(c, total, cfg.n_mc, 1 - modular::truncated_fraction(part.Y()), cfg);
}

IsoperimetricResult isoperimetric_check_ball(const CellPartition& part, const QuotientPoint& x0, double rho,
                                             const IsoConfig& cfg) {
    check_iso(cfg);
    if (!(rho > 0)) fail(ErrorKind::domain, "ball radius must be positive");
    const auto& cover = part.cover();
    auto inj = modular::injectivity_radius(x0, std::min(2 * rho + 1, modular::max_query_radius));
    if (rho > inj.radius) fail(ErrorKind::domain, "seed ball must be embedded (radius below the injectivity radius)");
    const double c = geom::ball_volume(rho) / cover.area();
    if (!(c < 1)) fail(ErrorKind::domain, "seed ball covers the whole space");
    modular::DistanceOracle oracle(x0, rho + cfg.r, part.Y());
    std::vector<std::size_t> hits(block_count(cfg.n_mc), 0);
    for_each_block(cfg.n_mc, block_size, cfg.workers, [&](std::size_t b, std::size_t lo, std::size_t hi) {
        Rng rng = block_rng(cfg.seed, walk::tag_isoperimetry, b);
        for (std::size_t k = lo; k < hi; ++k) {
            auto d = oracle(modular::sample_uniform_quotient(cover, part.Y(), rng));
            if (d && *d <= rho + cfg.r) ++hits[b];
        }
    });
    std::size_t total = std::accumulate(hits.begin(), hits.end(), std::size_t(0));
    return finish_iso(c, total, cfg.n_mc, 1 - modular::truncated_fraction(part.Y()), cfg);
}

} // namespace hypercut::mixing
