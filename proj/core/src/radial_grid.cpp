#include "hypercut/radial_grid.hpp"

#include "hypercut/error.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace hypercut {

RadialGrid::RadialGrid(double r_min, double r_max, std::size_t n_cells, std::vector<double> values,
                       bool probability)
    : r_min_(r_min), r_max_(r_max), values_(std::move(values)), probability_(probability) {
    if (!(r_max > r_min) || n_cells == 0) fail(ErrorKind::domain, "radial grid needs r_max > r_min and cells");
    if (values_.empty()) values_.assign(n_cells, 0.0);
    if (values_.size() != n_cells) fail(ErrorKind::domain, "radial grid value count mismatch");
    h_ = (r_max - r_min) / double(n_cells);
    check();
    rebuild_cdf();
}

double RadialGrid::default_step(double r_max) { return 1e-3 * std::max(1.0, r_max / 10.0); }

RadialGrid RadialGrid::with_step(double r_max, double step) {
    if (step <= 0) step = default_step(r_max);
    auto n = std::size_t(std::ceil(r_max / step - 1e-9));
    n = std::max<std::size_t>(n, 1);
    return RadialGrid(0.0, r_max, n);
}

void RadialGrid::check() const {
    for (double v : values_)
        if (!(v >= 0) || !std::isfinite(v)) fail(ErrorKind::numeric, "radial density must be finite and non-negative");
}

void RadialGrid::rebuild_cdf() {
    cum_.assign(values_.size() + 1, 0.0);
    for (std::size_t i = 0; i < values_.size(); ++i) cum_[i + 1] = cum_[i] + values_[i] * h_;
}

std::vector<double> RadialGrid::masses() const {
    std::vector<double> m(values_.size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = values_[i] * h_;
    return m;
}

void RadialGrid::set_masses(const std::vector<double>& m) {
    if (m.size() != values_.size()) fail(ErrorKind::domain, "mass vector size mismatch");
    for (std::size_t i = 0; i < m.size(); ++i) values_[i] = std::max(0.0, m[i]) / h_;
    check();
    rebuild_cdf();
}

double RadialGrid::total_mass() const { return cum_.back(); }

double RadialGrid::normalize() {
    double total = total_mass();
    if (!(total > 0)) fail(ErrorKind::numeric, "cannot normalize a zero measure");
    for (double& v : values_) v /= total;
    rebuild_cdf();
    probability_ = true;
    return total - 1.0;
}

double RadialGrid::cdf(double r) const {
    if (r <= r_min_) return 0.0;
    if (r >= r_max_) return cum_.back();
    double pos = (r - r_min_) / h_;
    auto i = std::min(std::size_t(pos), values_.size() - 1);
    return cum_[i] + (pos - double(i)) * h_ * values_[i];
}

double RadialGrid::quantile(double u) const {
    double target = u * cum_.back();
    auto it = std::upper_bound(cum_.begin(), cum_.end(), target);
    if (it == cum_.begin()) return r_min_;
    if (it == cum_.end()) return r_max_;
    std::size_t i = std::size_t(it - cum_.begin()) - 1;
    double m = cum_[i + 1] - cum_[i];
    double frac = m > 0 ? (target - cum_[i]) / m : 0.0;
    return edge(i) + frac * h_;
}

double RadialGrid::mean() const {
    double s = 0;
    for (std::size_t i = 0; i < values_.size(); ++i) s += mid(i) * values_[i] * h_;
    return s / cum_.back();
}

std::size_t RadialGrid::argmax() const {
    return std::size_t(std::max_element(values_.begin(), values_.end()) - values_.begin());
}

void RadialGrid::write_csv(std::ostream& os) const {
    os << "r,density\n";
    os.precision(17);
    for (std::size_t i = 0; i < values_.size(); ++i) os << mid(i) << ',' << values_[i] << '\n';
}

double sup_cdf_gap(const RadialGrid& a, const RadialGrid& b) {
    double gap = 0;
    for (std::size_t i = 0; i <= a.n_cells(); ++i) {
        double r = a.edge(i);
        gap = std::max(gap, std::abs(a.cdf(r) - b.cdf(r)));
    }
    for (std::size_t i = 0; i <= b.n_cells(); ++i) {
        double r = b.edge(i);
        gap = std::max(gap, std::abs(a.cdf(r) - b.cdf(r)));
    }
    return gap;
}

} // namespace hypercut
