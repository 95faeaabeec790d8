#include "hypercut/radial.hpp"

#include "hypercut/error.hpp"
#include "hypercut/spherical.hpp"
#include "quad.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hypercut::spectral {

double mixture2_cdf(double r, double r1) {
    if (!(r1 > 0)) fail(ErrorKind::domain, "step length must be positive");
    if (r <= 0) return 0.0;
    if (r >= 2 * r1) return 1.0;
    double ch = std::cosh(r1), sh = std::sinh(r1);
    double arg = std::clamp((ch * ch - std::cosh(r)) / (sh * sh), -1.0, 1.0);
    return std::acos(arg) / M_PI;
}

double step_cdf(double rho, double r, double r1) {
    if (rho <= std::abs(r - r1)) return 0.0;
    if (rho >= r + r1) return 1.0;
    double arg = (std::cosh(r) * std::cosh(r1) - std::cosh(rho)) / (std::sinh(r) * std::sinh(r1));
    return std::acos(std::clamp(arg, -1.0, 1.0)) / M_PI;
}

namespace {

std::size_t cells_for(double r_max, double h) { return std::max<std::size_t>(1, std::size_t(std::ceil(r_max / h - 1e-9))); }

// Accumulates CDF values at the edges of a uniform grid from point masses moved by a step law.
class EdgeCdf {
public:
    EdgeCdf(std::size_t n, double h) : h_(h), cdf_(n + 1, 0.0), below_(n + 2, 0.0) {}

    void add(double r, double step, double w) {
        const std::size_t n = cdf_.size() - 1;
        double lo = std::abs(r - step), hi = r + step;
        auto e0 = std::size_t(std::floor(lo / h_)) + 1;
        auto e1 = std::min(n, std::size_t(std::ceil(hi / h_)));
        for (std::size_t e = e0; e <= e1 && e <= n; ++e) {
            double edge = h_ * double(e);
            if (edge >= hi) {
                below_[e] += w;
                return;
            }
            cdf_[e] += w * step_cdf(edge, r, step);
        }
        if (e1 + 1 <= n) below_[e1 + 1] += w;
    }

    std::vector<double> masses() const {
        const std::size_t n = cdf_.size() - 1;
        std::vector<double> full(n + 1, 0.0);
        double run = 0;
        for (std::size_t e = 0; e <= n; ++e) {
            run += below_[e];
            full[e] = cdf_[e] + run;
        }
        std::vector<double> m(n);
        for (std::size_t i = 0; i < n; ++i) m[i] = std::max(0.0, full[i + 1] - full[i]);
        return m;
    }

private:
    double h_;
    std::vector<double> cdf_;
    std::vector<double> below_; // mass whose law lies entirely below the edge
};

RadialGrid finish(std::size_t n, double h, const std::vector<double>& masses, const char* what) {
    RadialGrid g(0.0, h * double(n), n);
    g.set_masses(masses);
    double defect = g.total_mass() - 1.0;
    if (std::abs(defect) > 1e-3) {
        std::ostringstream os;
        os << what << ": grid too coarse, mass defect " << defect;
        fail(ErrorKind::resolution, os.str());
    }
    g.normalize();
    return g;
}

void check_step(double step, double r1) {
    if (!(step > 0)) fail(ErrorKind::domain, "grid step must be positive");
    if (step > r1 / 10) fail(ErrorKind::resolution, "grid step must resolve the step length (step <= r1/10)");
}

} // namespace

RadialGrid radial_mixture(int k, double r1, double step, unsigned sub_nodes) {
    if (k < 2) fail(ErrorKind::domain, "radial mixture needs k >= 2; k = 0, 1 are atoms");
    if (!(r1 > 0)) fail(ErrorKind::domain, "step length must be positive");
    if (step <= 0) step = RadialGrid::default_step(k * r1);
    check_step(step, r1);
    std::size_t n = cells_for(2 * r1, step);
    std::vector<double> m(n);
    for (std::size_t i = 0; i < n; ++i) m[i] = mixture2_cdf(step * double(i + 1), r1) - mixture2_cdf(step * double(i), r1);
    RadialGrid g = finish(n, step, m, "radial_mixture");
    for (int j = 3; j <= k; ++j) g = convolve_step(g, r1, step, sub_nodes);
    return g;
}

RadialGrid convolve_step(const RadialGrid& a, double r1, double step, unsigned sub_nodes) {
    check_step(step, r1);
    if (sub_nodes == 0) sub_nodes = 1;
    std::size_t n = cells_for(a.r_max() + r1, step);
    EdgeCdf acc(n, step);
    const double ha = a.width();
    for (std::size_t i = 0; i < a.n_cells(); ++i) {
        double w = a.mass(i);
        if (w <= 0) continue;
        for (unsigned l = 0; l < sub_nodes; ++l) {
            double r = a.edge(i) + (l + 0.5) * ha / sub_nodes;
            acc.add(r, r1, w / sub_nodes);
        }
    }
    return finish(n, step, acc.masses(), "convolve_step");
}

RadialGrid convolve(const RadialGrid& a, const RadialGrid& b, double step, unsigned sub_nodes) {
    if (!(step > 0)) fail(ErrorKind::domain, "grid step must be positive");
    if (sub_nodes == 0) sub_nodes = 1;
    std::size_t n = cells_for(a.r_max() + b.r_max(), step);
    EdgeCdf acc(n, step);
    std::vector<std::pair<double, double>> bn;
    for (std::size_t j = 0; j < b.n_cells(); ++j) {
        double w = b.mass(j);
        if (w <= 1e-16) continue;
        for (unsigned l = 0; l < sub_nodes; ++l) bn.emplace_back(b.edge(j) + (l + 0.5) * b.width() / sub_nodes, w / sub_nodes);
    }
    for (std::size_t i = 0; i < a.n_cells(); ++i) {
        double w = a.mass(i);
        if (w <= 1e-16) continue;
        for (unsigned l = 0; l < sub_nodes; ++l) {
            double r = a.edge(i) + (l + 0.5) * a.width() / sub_nodes;
            for (const auto& [rb, wb] : bn) acc.add(r, rb, w / sub_nodes * wb);
        }
    }
    return finish(n, step, acc.masses(), "convolve");
}

double heat_density(double t, double r) {
    if (!(t > 0)) fail(ErrorKind::domain, "time must be positive");
    if (r <= 0) return 0.0;
    // s = r + u^2; the factor e^{-r^2/4t} is pulled out of the integral
    auto f = [r, t](double u) {
        double u2 = u * u;
        if (u2 == 0) return 2 * r * std::exp(-0.5 * detail::log_sinh(r));
        double lg = std::log(2 * u * (r + u2)) - (2 * r * u2 + u2 * u2) / (4 * t) -
                    0.5 * (M_LN2 + detail::log_sinh(r + u2 / 2) + detail::log_sinh(u2 / 2));
        return std::exp(lg);
    };
    double U = std::sqrt(-r + std::sqrt(r * r + 240.0 * t));
    auto q = detail::gk(f, 0.0, U, 1e-12, 25);
    if (!(q.value > 0)) return 0.0;
    double logp = std::log(2 * M_PI) + detail::log_sinh(r) + 0.5 * M_LN2 - t / 4 - 1.5 * std::log(4 * M_PI * t) -
                  r * r / (4 * t) + std::log(q.value);
    return std::exp(logp);
}

double heat_r_max(double t) { return t + 14 * std::sqrt(t) + 2; }

HeatKernel heat_radial_density(double t, double step) {
    if (!(t > 0)) fail(ErrorKind::domain, "time must be positive");
    if (t < 1e-3) fail(ErrorKind::resolution, "heat kernel below t = 1e-3 is not resolved by the radial grid");
    double r_max = heat_r_max(t);
    if (step <= 0) step = RadialGrid::default_step(r_max);
    if (step > std::sqrt(t) / 4) fail(ErrorKind::resolution, "grid step must resolve sqrt(t)");
    std::size_t n = cells_for(r_max, step);
    std::vector<double> pv(2 * n + 1);
    for (std::size_t j = 0; j <= 2 * n; ++j) pv[j] = heat_density(t, 0.5 * step * double(j));
    std::vector<double> m(n);
    for (std::size_t i = 0; i < n; ++i) m[i] = step / 6 * (pv[2 * i] + 4 * pv[2 * i + 1] + pv[2 * i + 2]);
    RadialGrid g(0.0, step * double(n), n);
    g.set_masses(m);
    HeatKernel out{g, 0.0};
    out.raw_defect = out.grid.normalize();
    return out;
}

double two_sided_tail(const RadialGrid& g, double center, double width) {
    double total = g.total_mass();
    return g.cdf(center - width) + (total - g.cdf(center + width));
}

double helgason_function(const std::function<double(double)>& F, double R, double s) {
    if (!(R > 0)) fail(ErrorKind::domain, "support radius must be positive");
    auto f = [&](double r) { return F(r) * spherical_principal(s, r) * std::sinh(r); };
    auto panels = unsigned(std::clamp(std::ceil(std::abs(s) * R / M_PI), 1.0, 4096.0));
    return 2 * M_PI * detail::gk_panels_abs(f, 0.0, R, panels, 1e-11).value;
}

double helgason_measure(const RadialGrid& m, double s) {
    double out = 0;
    for (std::size_t i = 0; i < m.n_cells(); ++i) {
        double w = m.mass(i);
        if (w != 0) out += w * spherical_principal(s, m.mid(i));
    }
    return out;
}

PhiTable::PhiTable(std::vector<double> s_grid, double step, double r_max)
    : s_(std::move(s_grid)), h_(step), n_(cells_for(r_max, step)) {
    if (!(step > 0)) fail(ErrorKind::domain, "grid step must be positive");
    table_.resize(n_ * s_.size());
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < s_.size(); ++j)
            table_[i * s_.size() + j] = spherical_principal(s_[j], (double(i) + 0.5) * h_);
}

std::vector<double> PhiTable::transform(const RadialGrid& m) const {
    if (m.r_min() != 0 || std::abs(m.width() - h_) > 1e-12 * h_ || m.n_cells() > n_)
        fail(ErrorKind::domain, "radial law does not match the tabulated grid");
    std::vector<double> out(s_.size(), 0.0);
    for (std::size_t i = 0; i < m.n_cells(); ++i) {
        double w = m.mass(i);
        if (w == 0) continue;
        for (std::size_t j = 0; j < s_.size(); ++j) out[j] += w * table_[i * s_.size() + j];
    }
    return out;
}

PlancherelReport plancherel_check(const std::function<double(double)>& F, double R, double s_max) {
    if (!(s_max > 0)) fail(ErrorKind::domain, "spectral cutoff must be positive");
    PlancherelReport out{};
    auto e = [&](double r) {
        double v = F(r);
        return v * v * std::sinh(r);
    };
    out.space_energy = 2 * M_PI * detail::gk(e, 0.0, R, 1e-12, 20).value;
    auto g = [&](double s) {
        double fh = helgason_function(F, R, s);
        return fh * fh * s * std::tanh(M_PI * s);
    };
    out.spectral_energy = detail::gk(g, 0.0, s_max, 1e-9, 10).value / (2 * M_PI);
    out.ratio = out.spectral_energy / out.space_energy;
    double f0 = helgason_function(F, R, 0.0);
    out.truncation = std::abs(helgason_function(F, R, s_max)) / std::abs(f0);
    return out;
}

} // namespace hypercut::spectral
