#pragma once

#include <cstddef>
#include <vector>

namespace hypercut::stats {

struct LinearFit {
    double slope = 0, intercept = 0, r2 = 0;
    std::size_t n = 0;
};

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

struct Moments {
    double mean = 0, variance = 0, skewness = 0;
    std::size_t n = 0;
};

// Two-pass moments in the given order (deterministic).
Moments moments(const std::vector<double>& v);

double normal_cdf(double x);

// Anderson-Darling statistic of v against N(mean, sd) with known parameters.
double anderson_darling(std::vector<double> v, double mean, double sd);
// 1% critical value of the known-parameter (case 0) Anderson-Darling statistic.
constexpr double anderson_darling_crit_1pct = 3.857;

double ks_two_sample(std::vector<double> a, std::vector<double> b);

template <class Cdf>
double ks_one_sample(std::vector<double> v, Cdf&& cdf);

double chi_square_quantile(double dof, double p);

double median(std::vector<double> v);

} // namespace hypercut::stats

#include <algorithm>
#include <cmath>

template <class Cdf>
double hypercut::stats::ks_one_sample(std::vector<double> v, Cdf&& cdf) {
    std::sort(v.begin(), v.end());
    const double n = double(v.size());
    double d = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        double f = cdf(v[i]);
        d = std::max({d, std::abs(f - double(i) / n), std::abs(double(i + 1) / n - f)});
    }
    return d;
}
