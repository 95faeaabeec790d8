#include "params.hpp"

#include "hypercut/cover.hpp"
#include "hypercut/density.hpp"
#include "hypercut/error.hpp"
#include "hypercut/mixing.hpp"
#include "hypercut/radial.hpp"
#include "hypercut/spherical.hpp"
#include "hypercut/stats.hpp"
#include "hypercut/torus.hpp"
#include "hypercut/walk.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>

#ifndef HYPERCUT_VERSION
#define HYPERCUT_VERSION "0.0.0"
#endif

using namespace hypercut;
using cli::json;
using cli::Param;
using cli::ParamSet;

namespace {

struct Context {
    const ParamSet& p;
    std::uint64_t seed;
    unsigned workers;
};

struct Table {
    std::string name; // file stem suffix; empty for the main table
    std::vector<std::string> header;
    std::ostringstream body;
};

struct Output {
    json report = json::object();
    std::vector<std::unique_ptr<Table>> tables;

    Table& table(std::vector<std::string> header, std::string name = {}) {
        tables.push_back(std::make_unique<Table>());
        tables.back()->header = std::move(header);
        tables.back()->name = std::move(name);
        tables.back()->body << std::setprecision(12);
        return *tables.back();
    }
};

template <class... T>
void row(Table& t, const T&... v) {
    bool first = true;
    ((t.body << (first ? "" : ",") << v, first = false), ...);
    t.body << '\n';
}

json to_json(const std::vector<double>& v) { return json(v); }

modular::QuotientPoint start_point(const ParamSet& p, int q) {
    auto x0 = p.list("x0");
    if (x0.size() != 2) fail(ErrorKind::config, "x0 must be [x, y]");
    auto red = modular::reduce_fundamental(geom::PointH(x0[0], x0[1]));
    // the lift of (base, sheet) is sheet^{-1} base, so the sheet of x0 is gamma mod q
    return {red.point, modular::CosetModQ::reduce(red.gamma, q)};
}

void cmd_constants(const Context& c, Output& out) {
    auto cc = spectral::clt_constants(c.p.num("r1"));
    out.report["alpha"] = cc.alpha;
    out.report["sigma2"] = cc.sigma2;
    out.report["constant_bounds_hold"] = cc.alpha > 0 && cc.alpha < 1 && cc.sigma2 <= 4;
}

void cmd_spherical(const Context& c, Output& out) {
    const double p = c.p.num("p");
    if (p == 0) {
        const double r = c.p.num("r"), s_max = c.p.num("s_max"), h = c.p.num("s_step");
        if (!(h > 0) || !(s_max >= 0)) fail(ErrorKind::domain, "need s_step > 0 and s_max >= 0");
        auto& t = out.table({"s", "phi", "bound", "violation"});
        const double bound = spectral::hc_bound(r, 2);
        std::size_t violations = 0;
        for (long i = 0; i * h <= s_max + 1e-12; ++i) {
            double s = double(i) * h, phi = spectral::spherical_principal(s, r);
            bool bad = std::abs(phi) > bound + 1e-6;
            violations += bad;
            row(t, s, phi, bound, int(bad));
        }
        out.report["series"] = "principal";
        out.report["violations"] = violations;
        return;
    }
    const double eps = c.p.num("eps");
    std::vector<double> fit, check;
    for (double r = c.p.num("r_min"); r <= c.p.num("r_max") + 1e-12; r += 0.05) check.push_back(r);
    for (std::size_t i = 0; i < check.size(); i += 5) fit.push_back(check[i]);
    auto f = spectral::fit_lp_envelope(p, eps, fit, check);
    auto& t = out.table({"r", "phi", "hc_bound", "envelope"});
    for (double r : check)
        row(t, r, spectral::spherical_complementary(p, r), spectral::hc_bound(r, p),
            f.constant * spectral::lp_envelope(p, r, eps));
    out.report["series"] = "complementary";
    out.report["lambda"] = spectral::p_to_lambda(p);
    out.report["fitted_constant"] = f.constant;
    out.report["violations"] = f.violations;
    auto dec = spectral::decay_exponent_check(p, eps);
    out.report["decay"] = {{"head", dec.head}, {"tail", dec.tail}, {"rate", dec.rate}, {"convergent", dec.convergent}};
}

void cmd_mixture(const Context& c, Output& out) {
    const int k = int(c.p.integer("k"));
    const double r1 = c.p.num("r1");
    auto g = spectral::radial_mixture(k, r1, c.p.num("step"));
    auto& t = out.table({"r", "density"});
    for (std::size_t i = 0; i < g.n_cells(); ++i) row(t, g.mid(i), g.values()[i]);
    out.report["mean"] = g.mean();
    out.report["mass"] = g.total_mass();
    if (k == 2) {
        double gap = 0;
        for (std::size_t i = 0; i <= g.n_cells(); ++i)
            gap = std::max(gap, std::abs(g.cdf(g.edge(i)) - spectral::mixture2_cdf(g.edge(i), r1)));
        out.report["closed_form_cdf_gap"] = gap;
    }
}

void cmd_heat(const Context& c, Output& out) {
    const double t = c.p.num("t");
    auto hk = spectral::heat_radial_density(t, c.p.num("step"));
    auto& tab = out.table({"r", "density"});
    for (std::size_t i = 0; i < hk.grid.n_cells(); ++i) row(tab, hk.grid.mid(i), hk.grid.values()[i]);
    out.report["raw_defect"] = hk.raw_defect;
    std::vector<double> x, y;
    json tails = json::array();
    for (double l : c.p.list("lambdas")) {
        double pr = spectral::two_sided_tail(hk.grid, t, l * std::sqrt(t));
        tails.push_back({{"lambda", l}, {"mass", pr}});
        if (pr > 1e-14) {
            x.push_back(l * l);
            y.push_back(std::log(pr));
        }
    }
    out.report["tails"] = tails;
    if (x.size() >= 2) {
        auto fit = stats::linear_fit(x, y);
        out.report["tail_fit"] = {{"slope", fit.slope}, {"r2", fit.r2}};
    }
}

void cmd_walk(const Context& c, Output& out) {
    walk::WalkConfig cfg;
    cfg.r1 = c.p.num("r1");
    cfg.t = c.p.num("t");
    cfg.k = int(c.p.integer("k"));
    cfg.n_walkers = std::size_t(c.p.integer("n"));
    cfg.seed = c.seed;
    cfg.workers = c.workers;
    cfg.trajectory_walkers = std::size_t(c.p.integer("trajectories"));
    auto st = walk::walk_discrete(cfg);
    auto& t = out.table({"step", "mean_log_y", "var_log_y", "mean_dist", "var_dist", "mean_x2"});
    for (std::size_t j = 0; j < st.per_step.size(); ++j) {
        const auto& a = st.per_step[j];
        row(t, j, a.mean_log_y, a.var_log_y, a.mean_dist, a.var_dist, a.mean_x2);
    }
    if (!st.trajectories.empty()) {
        auto& tr = out.table({"walker", "step", "x", "y"}, "trajectories");
        for (const auto& p : st.trajectories) row(tr, p.walker, p.step, p.x, p.y);
    }
    out.report["dist_quantiles"] = st.dist_quantiles;
    out.report["support_violations"] = st.support_violations;
    if (cfg.t == 0) {
        auto clt = walk::clt_check(st, cfg.r1);
        if (clt.skipped) {
            out.report["clt"] = {{"skipped", true}, {"notice", clt.notice}};
        } else {
            out.report["clt"] = {{"alpha", clt.alpha},          {"sigma2", clt.sigma2},
                                 {"mean_drift", clt.mean_drift}, {"drift_tolerance", clt.drift_tolerance},
                                 {"variance", clt.variance},     {"variance_rel_error", clt.variance_rel_error},
                                 {"anderson_darling", clt.ad_statistic}, {"pass", clt.pass}};
        }
        if (cfg.r1 >= 0.05 && cfg.k >= 1) {
            auto tails = walk::tail_checks(st, cfg.r1, c.p.list("lambdas"));
            json fams = json::array();
            for (const auto& f : tails.families)
                fams.push_back({{"family", f.name}, {"lambda", f.lambda}, {"prob", f.prob}, {"censored", f.censored},
                                {"slope", f.slope}, {"r2", f.r2}, {"pass", f.pass}});
            out.report["tails"] = fams;
        }
    }
}

void cmd_tv(const Context& c, Output& out) {
    const int q = int(c.p.integer("q"));
    modular::CongruenceCover cover(q);
    mixing::TvConfig cfg;
    cfg.x0 = start_point(c.p, q);
    cfg.r1 = c.p.num("r1");
    cfg.k_max = int(c.p.integer("k_max"));
    cfg.n_walkers = std::size_t(c.p.integer("n"));
    cfg.seed = c.seed;
    cfg.workers = c.workers;
    cfg.resolution = int(c.p.integer("resolution"));
    cfg.Y = c.p.num("Y");
    cfg.bootstrap = int(c.p.integer("bootstrap"));
    cfg.r0 = c.p.num("r0");
    auto prof = mixing::tv_profile(cover, cfg);
    auto& t = out.table({"k", "tv", "ci_lo", "ci_hi"});
    for (std::size_t i = 0; i < prof.k.size(); ++i) row(t, prof.k[i], prof.tv[i], prof.ci_lo[i], prof.ci_hi[i]);
    out.report["partition"] = prof.partition;
    out.report["starved_bins"] = prof.starved_bins;
    out.report["plug_in_floor"] = prof.plug_in_floor;
    out.report["injectivity_radius"] = prof.injectivity_radius;
    out.report["R_X"] = cover.R_X();
    const double alpha = spectral::clt_constants(cfg.r1).alpha;
    std::vector<double> times(prof.k.begin(), prof.k.end());
    try {
        auto ct = mixing::cutoff_locator(times, prof.tv, alpha * cfg.r1, cover.R_X());
        json te = json::object();
        for (auto [eps, tt] : ct.t_eps) te[std::to_string(eps).substr(0, 3)] = tt;
        out.report["cutoff"] = {{"t_eps", te}, {"location", ct.location}, {"width", ct.width},
                                {"width_over_location", ct.width_over_location}};
    } catch (const Error& e) {
        out.report["cutoff"] = {{"error", e.what()}};
    }
}

double default_R_max(const modular::CongruenceCover& cover, double R_max) {
    if (R_max > 0) return R_max;
    double RX = cover.R_X();
    return RX + 3 * std::log(RX) + 1;
}

void cmd_distances(const Context& c, Output& out) {
    const int q = int(c.p.integer("q"));
    modular::CongruenceCover cover(q);
    auto x0 = start_point(c.p, q);
    auto s = mixing::sample_distances(cover, x0, std::size_t(c.p.integer("n")), default_R_max(cover, c.p.num("R_max")),
                                      c.p.num("Y"), c.seed, c.workers);
    auto h = mixing::distance_histogram(cover, x0, s, c.p.list("gammas"), c.p.list("radii"));
    const double bw = c.p.num("bin_width");
    if (!(bw > 0)) fail(ErrorKind::domain, "bin_width must be positive");
    std::vector<std::size_t> counts;
    for (double d : s.d) {
        auto b = std::size_t(d / bw);
        if (b >= counts.size()) counts.resize(b + 1, 0);
        ++counts[b];
    }
    auto& t = out.table({"bin_lo", "bin_hi", "count"});
    for (std::size_t b = 0; b < counts.size(); ++b) row(t, double(b) * bw, double(b + 1) * bw, counts[b]);
    out.report["R_X"] = h.R_X;
    out.report["censored"] = h.censored;
    out.report["truncation_factor"] = s.truncation_factor;
    out.report["injectivity_radius"] = h.injectivity_radius;
    out.report["lower_tail"] = {{"gamma", h.gamma}, {"frac_below", h.frac_below}, {"frac_above", h.frac_above},
                                {"scaled_below", h.scaled_below}, {"fitted_C", h.fitted_C}, {"stability", h.stability}};
    out.report["balls"] = {{"r", h.r}, {"frac_within", h.frac_within}, {"ball_ratio", h.ball_ratio},
                           {"rel_error", h.rel_error}};
}

void cmd_concentration(const Context& c, Output& out) {
    std::vector<double> d;
    std::optional<double> RX;
    const std::string input = c.p.str("input");
    if (!input.empty()) {
        std::ifstream in(input);
        if (!in) fail(ErrorKind::config, "cannot open " + input);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            try {
                d.push_back(std::stod(line));
            } catch (const std::exception&) {
                continue; // header lines
            }
        }
    } else {
        const int q = int(c.p.integer("q"));
        modular::CongruenceCover cover(q);
        RX = cover.R_X();
        d = mixing::sample_distances(cover, start_point(c.p, q), std::size_t(c.p.integer("n")),
                                     default_R_max(cover, 0), c.p.num("Y"), c.seed, c.workers)
                .d;
    }
    auto rep = mixing::concentration_fit(d, c.p.num("gamma_step"), RX);
    auto& t = out.table({"gamma", "tail"});
    for (std::size_t i = 0; i < rep.gamma.size(); ++i) row(t, rep.gamma[i], rep.tail[i]);
    out.report["R_med"] = rep.R_med;
    out.report["a"] = rep.a;
    out.report["slope"] = rep.slope;
    out.report["r2"] = rep.r2;
    out.report["verdict"] = rep.conclusive ? (rep.a > 1 ? "exponential tail" : "no decay") : "inconclusive";
    if (rep.within_R_window) out.report["median_in_R_window"] = *rep.within_R_window;
}

void cmd_isoperimetry(const Context& c, Output& out) {
    const int q = int(c.p.integer("q"));
    modular::CongruenceCover cover(q);
    mixing::CellPartition part(cover, c.p.num("Y"), int(c.p.integer("resolution")));
    auto& t = out.table({"r", "c", "c_prime", "c_prime_se", "kappa", "bound", "verdict"});
    const std::string seed_kind = c.p.str("region");
    for (double r : c.p.list("radii")) {
        mixing::IsoConfig ic;
        ic.r = r;
        ic.p = c.p.num("p");
        ic.p_certified = c.p.flag("p_certified");
        ic.n_mc = std::size_t(c.p.integer("n"));
        ic.seed = c.seed;
        ic.workers = c.workers;
        mixing::IsoperimetricResult res;
        if (seed_kind == "ball") {
            res = mixing::isoperimetric_check_ball(part, start_point(c.p, q), c.p.num("rho"), ic);
        } else if (seed_kind == "cells") {
            std::vector<std::size_t> cells, sheets;
            for (double v : c.p.list("cells")) cells.push_back(std::size_t(v));
            for (double v : c.p.list("sheets")) sheets.push_back(std::size_t(v));
            res = mixing::isoperimetric_check_cells(part, cells, sheets, ic);
        } else {
            fail(ErrorKind::config, "region must be 'ball' or 'cells'");
        }
        row(t, r, res.c, res.c_prime, res.c_prime_se, res.kappa, res.bound, res.verdict);
    }
    out.report["partition"] = part.descriptor();
    out.report["p_certified"] = c.p.flag("p_certified");
}

std::vector<covers::EigenvalueBudget> load_budgets(const ParamSet& p) {
    const auto Ns = p.list("N");
    const std::string family = p.str("family");
    std::vector<covers::EigenvalueBudget> out;
    if (family == "a1") {
        for (double N : Ns) out.push_back(covers::EigenvalueBudget::synthetic_a1(N, p.list("p_grid")));
    } else if (family == "uniform") {
        for (double N : Ns) out.push_back(covers::EigenvalueBudget::uniform(N, p.num("p_max")));
    } else if (family == "file") {
        auto files = p.values().at("budget_files");
        if (!files.is_string()) fail(ErrorKind::config, "budget_files must be a comma-separated path list");
        std::stringstream ss(files.get<std::string>());
        std::string path;
        std::size_t i = 0;
        while (std::getline(ss, path, ',')) {
            if (i >= Ns.size()) fail(ErrorKind::config, "more budget files than N values");
            std::ifstream in(path);
            if (!in) fail(ErrorKind::config, "cannot open " + path);
            json j;
            try {
                in >> j;
            } catch (const json::exception& e) {
                fail(ErrorKind::config, path + ": " + e.what());
            }
            std::vector<covers::BudgetEntry> e;
            for (const auto& item : j) e.push_back({item.at("p").get<double>(), item.at("m").get<long long>()});
            out.emplace_back(std::move(e), Ns[i++], path);
        }
        if (i != Ns.size()) fail(ErrorKind::config, "need one budget file per N value");
    } else {
        fail(ErrorKind::config, "family must be a1, uniform or file");
    }
    return out;
}

void cmd_density(const Context& c, Output& out) {
    auto budgets = load_budgets(c.p);
    const double A = c.p.num("A"), eps = c.p.num("eps"), C = c.p.num("C");
    json checks = json::array();
    for (const auto& b : budgets) {
        auto d = covers::density_condition_check(b, A, eps, C);
        checks.push_back({{"N", b.N()}, {"label", b.label()}, {"pass", d.pass}, {"worst_p", d.worst_p},
                          {"worst_ratio", d.worst_ratio}, {"total_linear", d.total_linear}});
    }
    out.report["density_condition"] = checks;
    out.report["constants"] = {{"A", A}, {"eps", eps}, {"C", C}};
    covers::GrowthFunction g{c.p.num("g_s"), c.p.num("g_delta"), c.p.num("g_c")};
    if (budgets.size() >= 3) {
        auto rep = covers::normal_cover_requirement(budgets, g);
        auto& t = out.table({"N_q", "req0", "req_integral", "req_limit"});
        for (const auto& r : rep.rows) row(t, r.N, r.req0, r.req_integral, r.req_limit);
        out.report["o1_proxy"] = "strictly decreasing over the supplied N and final value < 0.1";
        out.report["vanishing"] = {{"req0", rep.req0_vanishing},
                                   {"req_integral", rep.integral_vanishing},
                                   {"req_limit", rep.limit_vanishing}};
        out.report["pass"] = rep.pass();
    }
    double RX = c.p.num("R_X");
    if (RX > 0) {
        json dil = json::array();
        for (double p : c.p.list("p_grid")) dil.push_back({{"p", p}, {"r", covers::lp_radius_dilation(p, RX, c.p.num("gamma"))}});
        out.report["lp_radius"] = dil;
    }
}

void cmd_torus(const Context& c, Output& out) {
    const double lambda = c.p.num("lambda");
    auto& t = out.table({"lambda", "t", "l1", "lower", "upper"});
    json rows = json::array();
    for (double tt : c.p.list("t")) {
        torus::TorusConfig cfg{lambda, tt};
        auto l1 = torus::torus_l1(cfg);
        row(t, lambda, tt, l1.l1, l1.lower, l1.upper);
        double agree = 0;
        for (int i = 0; i < 100; ++i) {
            auto d = torus::torus_density(cfg, i / 100.0);
            agree = std::max(agree, std::abs(d.theta - d.fourier));
        }
        rows.push_back({{"t", tt}, {"l1", l1.l1}, {"l2", l1.l2}, {"quadrature_error", l1.error},
                        {"lower_margin", l1.lower_margin}, {"upper_margin", l1.upper_margin},
                        {"inside_sandwich", l1.lower_margin > 0 && l1.upper_margin > 0},
                        {"theta_fourier_max_diff", agree}});
    }
    out.report["rows"] = rows;
    auto T = c.p.list("T");
    if (!T.empty()) {
        auto nc = torus::no_cutoff_profile(c.p.list("lambdas"), T);
        auto& nt = out.table({"lambda", "T", "t", "ratio", "bracket_lo", "bracket_hi"}, "no_cutoff");
        for (const auto& r : nc.rows) row(nt, r.lambda, r.T, r.t, r.ratio, r.bracket_lo, r.bracket_hi);
        out.report["no_cutoff"] = {{"c1", nc.c1}, {"c2", nc.c2}, {"spread", nc.spread}};
    }
}

void cmd_cover(const Context& c, Output& out) {
    const int n = int(c.p.integer("n"));
    Rng rng = block_rng(c.seed, walk::tag_cover, 0);
    auto rc = modular::random_cover(n, rng);
    out.report["transitive"] = rc.transitive();
    out.report["sigma_A"] = rc.sigma_A;
    out.report["sigma_B"] = rc.sigma_B;
    auto pr = modular::sheet_mixing_probe(rc, c.p.num("r1"), int(c.p.integer("k")), std::size_t(c.p.integer("walkers")),
                                          c.seed, c.workers);
    auto& t = out.table({"step", "tv"});
    for (std::size_t j = 0; j < pr.tv.size(); ++j) row(t, j, pr.tv[j]);
    out.report["rate"] = pr.rate;
    out.report["effective_p"] = pr.effective_p;
    out.report["fit_points"] = pr.fit_points;
    if (n <= 5) out.report["transitive_pairs"] = modular::count_transitive_pairs(n);
}

struct Command {
    std::string name, help;
    std::vector<Param> params;
    std::function<void(const Context&, Output&)> run;
};

json arr(std::initializer_list<double> v) { return json(std::vector<double>(v)); }

std::vector<Command> commands() {
    const Param x0{"x0", arr({0, 1}), "start point x,y (reduced into the standard domain)"};
    const Param Y{"Y", 10.0, "cusp cap height"};
    return {
        {"constants", "CLT drift alpha and variance sigma^2 for step length r1", {{"r1", 1.0, "step length"}}, cmd_constants},
        {"spherical",
         "spherical function table: principal series over s (p = 0) or complementary series over r",
         {{"r", 2.0, "radius (principal series)"},
          {"s_max", 40.0, "largest s"},
          {"s_step", 0.05, "s grid step"},
          {"p", 0.0, "complementary exponent p > 2 (0 selects the principal series)"},
          {"eps", 0.1, "envelope slack epsilon"},
          {"r_min", 0.5, "smallest r (complementary series)"},
          {"r_max", 12.0, "largest r (complementary series)"}},
         cmd_spherical},
        {"mixture", "radial law of the k-step walk",
         {{"k", std::int64_t(3), "steps (>= 2)"}, {"r1", 1.0, "step length"}, {"step", 0.0, "grid step (0 = default)"}},
         cmd_mixture},
        {"heat", "radial heat kernel at time t with tail masses",
         {{"t", 1.0, "time"}, {"step", 0.0, "grid step (0 = default)"}, {"lambdas", arr({0.5, 1, 1.5, 2, 2.5, 3}), "tail widths"}},
         cmd_heat},
        {"walk", "ensemble of step walks (or Brownian jumps when t > 0) from i",
         {{"r1", 1.0, "step length"},
          {"t", 0.0, "Brownian jump time (0 = fixed-length steps)"},
          {"k", std::int64_t(50), "steps"},
          {"n", std::int64_t(10000), "walkers"},
          {"trajectories", std::int64_t(0), "walkers whose full paths are written"},
          {"lambdas", arr({0.5, 1, 1.5, 2, 2.5, 3}), "tail-check widths"}},
         cmd_walk},
        {"tv", "total-variation profile of the walk on X_q",
         {{"q", std::int64_t(5), "level"},
          x0,
          {"r1", 1.0, "step length"},
          {"k_max", std::int64_t(40), "last step"},
          {"n", std::int64_t(100000), "walkers"},
          {"resolution", std::int64_t(0), "cells per side (0 = smallest reaching mu(X)/1000)"},
          Y,
          {"bootstrap", std::int64_t(200), "bootstrap resamples"},
          {"r0", 0.05, "injectivity-radius floor for the start point"}},
         cmd_tv},
        {"distances", "distance law from x0 to uniform points of X_q",
         {{"q", std::int64_t(5), "level"},
          x0,
          {"n", std::int64_t(10000), "samples"},
          {"R_max", 0.0, "distance cap (0 = R_X + 3 ln R_X + 1)"},
          Y,
          {"gammas", arr({0.5, 1, 2}), "lower-tail exponents"},
          {"radii", arr({0.25, 0.5, 0.75, 1, 1.25, 1.5}), "ball radii"},
          {"bin_width", 0.05, "histogram bin width"}},
         cmd_distances},
        {"concentration", "tail fit of |d - median| for distance samples",
         {{"q", std::int64_t(5), "level"},
          x0,
          {"n", std::int64_t(10000), "samples (>= 10^4)"},
          Y,
          {"gamma_step", 0.1, "gamma grid step"},
          {"input", std::string(), "CSV of distances instead of sampling"}},
         cmd_concentration},
        {"isoperimetry", "dilation lower bound for a seed region of X_q",
         {{"q", std::int64_t(5), "level"},
          x0,
          Y,
          {"resolution", std::int64_t(0), "cells per side"},
          {"region", std::string("ball"), "ball or cells"},
          {"rho", 0.5, "seed ball radius"},
          {"cells", arr({}), "seed cell indices"},
          {"sheets", arr({0}), "seed sheet indices"},
          {"radii", arr({0.5, 1, 2}), "dilation radii"},
          {"p", 2.0, "spectral exponent"},
          {"p_certified", false, "assert the bound (p is certified for this cover)"},
          {"n", std::int64_t(20000), "Monte-Carlo samples"}},
         cmd_isoperimetry},
        {"density", "density condition and covering requirements for eigenvalue budgets",
         {{"family", std::string("a1"), "a1, uniform or file"},
          {"N", arr({1e3, 1e4, 1e5, 1e6}), "cover degrees"},
          {"p_grid", arr({3, 4, 6, 8, 12}), "p values of the synthetic budget"},
          {"p_max", 50.0, "largest p of the uniform budget"},
          {"budget_files", std::string(), "comma-separated JSON budgets [{p, m}], one per N"},
          {"A", 1.0, "density parameter"},
          {"eps", 0.1, "density slack"},
          {"C", 1.0, "implicit constant"},
          {"g_s", 1.2, "growth g(R) = s R + delta ln R + c: s"},
          {"g_delta", 0.0, "growth delta"},
          {"g_c", 0.0, "growth c"},
          {"R_X", 0.0, "radius for the L^p dilation table (0 = skip)"},
          {"gamma", 1.0, "dilation gamma"}},
         cmd_density},
        {"torus", "flat-torus L1 distance, sandwich bounds and no-cutoff profile",
         {{"lambda", 1.0, "scale lambda"},
          {"t", arr({5}), "times"},
          {"T", arr({}), "no-cutoff targets e^{-T} (empty = skip)"},
          {"lambdas", arr({1, 10, 100}), "no-cutoff lambda grid"}},
         cmd_torus},
        {"cover", "random n-sheeted cover of Gamma(2): sheet mixing probe",
         {{"n", std::int64_t(6), "sheets"},
          {"r1", 1.0, "step length"},
          {"k", std::int64_t(20), "steps"},
          {"walkers", std::int64_t(20000), "walkers"}},
         cmd_cover},
    };
}

int exit_code(ErrorKind k) {
    switch (k) {
    case ErrorKind::usage: return 1;
    case ErrorKind::config:
    case ErrorKind::domain: return 2;
    case ErrorKind::capacity: return 3;
    default: return 4;
    }
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) fail(ErrorKind::config, "cannot write " + path.string());
    f << text;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"hypercut: hyperbolic random walks, spectra and cutoff experiments"};
    app.require_subcommand(1);
    std::string config_path, out_dir;
    std::uint64_t seed = 1;
    int workers = 0;
    app.add_option("--config", config_path, "JSON config; keys as the subcommand flags, unknown keys rejected");
    auto* seed_opt = app.add_option("--seed", seed, "RNG seed (U64)");
    app.add_option("--workers", workers, "worker threads (default: HYPERCUT_WORKERS, else all cores)");
    app.add_option("--out", out_dir, "directory for <command>.csv, <command>.json and <command>.config.json");
    app.fallthrough();
    app.set_version_flag("--version", HYPERCUT_VERSION);

    auto cmds = commands();
    std::vector<std::unique_ptr<ParamSet>> sets;
    std::vector<CLI::App*> subs;
    for (auto& c : cmds) {
        sets.push_back(std::make_unique<ParamSet>(c.name, c.params));
        subs.push_back(app.add_subcommand(c.name, c.help));
        sets.back()->attach(*subs.back());
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        std::size_t idx = 0;
        while (!subs[idx]->parsed()) ++idx;
        auto& ps = *sets[idx];
        json config;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) fail(ErrorKind::config, "cannot open config " + config_path);
            try {
                in >> config;
            } catch (const json::exception& e) {
                fail(ErrorKind::config, std::string("config parse error: ") + e.what());
            }
            if (config.is_object() && config.contains("seed") && !seed_opt->count()) {
                if (!config["seed"].is_number_unsigned()) fail(ErrorKind::config, "seed must be an unsigned integer");
                seed = config["seed"].get<std::uint64_t>();
            }
        }
        ps.resolve(config);
        json effective = ps.values();
        effective["command"] = ps.command();
        effective["seed"] = seed;
        const std::string hash = cli::config_hash(effective);

        Context ctx{ps, seed, resolve_workers(workers)};
        Output out;
        auto t0 = std::chrono::steady_clock::now();
        cmds[idx].run(ctx, out);
        double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        json report;
        report["version"] = HYPERCUT_VERSION;
        report["command"] = ps.command();
        report["config_hash"] = hash;
        report["wall_time"] = wall;
        report["config"] = effective;
        report["result"] = out.report;

        auto csv = [&](const Table& t) {
            std::ostringstream os;
            os << "# hypercut " << HYPERCUT_VERSION << " command=" << ps.command() << " config_hash=" << hash
               << " wall_time=" << wall << '\n';
            for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << t.header[i];
            os << '\n' << t.body.str();
            return os.str();
        };
        if (!out_dir.empty()) {
            std::filesystem::create_directories(out_dir);
            std::filesystem::path dir(out_dir);
            for (const auto& t : out.tables)
                write_file(dir / (ps.command() + (t->name.empty() ? "" : "_" + t->name) + ".csv"), csv(*t));
            write_file(dir / (ps.command() + ".json"), report.dump(2) + "\n");
            write_file(dir / (ps.command() + ".config.json"), effective.dump(2) + "\n");
            std::cout << report.dump(2) << '\n';
        } else if (!out.tables.empty()) {
            std::cout << csv(*out.tables.front());
            std::cerr << report.dump() << '\n';
        } else {
            std::cout << report.dump(2) << '\n';
        }
        return 0;
    } catch (const Error& e) {
        std::cerr << "error (" << kind_name(e.kind()) << "): " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    }
}
