#include "hypercut/stats.hpp"

#include "hypercut/error.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cmath>

namespace hypercut::stats {

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) fail(ErrorKind::domain, "linear fit needs two or more paired points");
    const double n = double(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0) fail(ErrorKind::numeric, "linear fit with constant abscissa");
    LinearFit f;
    f.n = x.size();
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r2 = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return f;
}

Moments moments(const std::vector<double>& v) {
    Moments m;
    m.n = v.size();
    if (v.empty()) return m;
    double s = 0;
    for (double x : v) s += x;
    m.mean = s / double(v.size());
    double s2 = 0, s3 = 0;
    for (double x : v) {
        double d = x - m.mean;
        s2 += d * d;
        s3 += d * d * d;
    }
    if (v.size() > 1) m.variance = s2 / double(v.size() - 1);
    double pop = s2 / double(v.size());
    if (pop > 0) m.skewness = (s3 / double(v.size())) / std::pow(pop, 1.5);
    return m;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double anderson_darling(std::vector<double> v, double mean, double sd) {
    if (v.empty() || !(sd > 0)) fail(ErrorKind::domain, "Anderson-Darling needs samples and sd > 0");
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double zi = (v[i] - mean) / sd;
        double zj = (v[n - 1 - i] - mean) / sd;
        // log Phi(z) and log(1 - Phi(z)) through erfc for tail accuracy
        double lf = std::log(0.5 * std::erfc(-zi / std::sqrt(2.0)));
        double lg = std::log(0.5 * std::erfc(zj / std::sqrt(2.0)));
        s += double(2 * i + 1) * (lf + lg);
    }
    return -double(n) - s / double(n);
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) fail(ErrorKind::domain, "KS test needs samples");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double d = 0;
    const double na = double(a.size()), nb = double(b.size());
    while (i < a.size() && j < b.size()) {
        double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(double(i) / na - double(j) / nb));
    }
    return d;
}

double chi_square_quantile(double dof, double p) {
    return boost::math::quantile(boost::math::chi_squared(dof), p);
}

double median(std::vector<double> v) {
    if (v.empty()) fail(ErrorKind::domain, "median of empty sample");
    auto mid = v.begin() + std::ptrdiff_t(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    double hi = *mid;
    if (v.size() % 2) return hi;
    double lo = *std::max_element(v.begin(), mid);
    return 0.5 * (lo + hi);
}

} // namespace hypercut::stats
