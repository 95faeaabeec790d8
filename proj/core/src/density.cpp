#include "hypercut/density.hpp"

#include "hypercut/error.hpp"
#include "hypercut/spherical.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hypercut::covers {

EigenvalueBudget::EigenvalueBudget(std::vector<BudgetEntry> entries, double N, std::string label)
    : entries_(std::move(entries)), N_(N), label_(std::move(label)) {
    if (!(N >= 1)) fail(ErrorKind::domain, "cover degree N must be at least 1");
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto& e = entries_[i];
        if (!(e.p > 2) || !std::isfinite(e.p)) fail(ErrorKind::domain, "budget p must be finite and > 2");
        if (e.m < 1) fail(ErrorKind::domain, "budget multiplicity must be >= 1");
        if (i && !(e.p > entries_[i - 1].p)) fail(ErrorKind::domain, "budget p values must be strictly increasing");
    }
}

long long EigenvalueBudget::total() const {
    long long s = 0;
    for (const auto& e : entries_) s += e.m;
    return s;
}

EigenvalueBudget EigenvalueBudget::synthetic_a1(double N, const std::vector<double>& p_grid) {
    std::vector<BudgetEntry> e;
    for (double p : p_grid) {
        auto m = std::llround(std::pow(N, 2 / p));
        if (m >= 1) e.push_back({p, m});
    }
    std::ostringstream os;
    os << "synthetic A=1 N=" << N;
    return {std::move(e), N, os.str()};
}

EigenvalueBudget EigenvalueBudget::uniform(double N, double p_max) {
    std::ostringstream os;
    os << "uniform M=N N=" << N;
    return {{{p_max, std::llround(N)}}, N, os.str()};
}

long long M_of_p(const EigenvalueBudget& b, double p) {
    if (!(p > 2)) fail(ErrorKind::domain, "M(p) is defined for p > 2");
    long long s = 0;
    for (const auto& e : b.entries())
        if (e.p >= p) s += e.m;
    return s;
}

double GrowthFunction::operator()(double R) const {
    if (!(R > 0)) fail(ErrorKind::domain, "growth function needs R > 0");
    return s * R + delta * std::log(R) + c;
}

bool GrowthFunction::dominates(double delta0, double R0, double R_hi) const {
    for (int i = 0; i <= 1000; ++i) {
        double R = R0 + (R_hi - R0) * i / 1000.0;
        if ((*this)(R) < R + delta0 * std::log(R)) return false;
    }
    return true;
}

DensityCheck density_condition_check(const EigenvalueBudget& b, double A, double eps, double C) {
    if (!(A >= 1) || !(eps > 0) || !(C > 0)) fail(ErrorKind::domain, "density check needs A >= 1, eps > 0, C > 0");
    DensityCheck out;
    out.A = A;
    out.eps = eps;
    out.C = C;
    // M is constant on (p_{i-1}, p_i] and the bound decreases in p, so breakpoints are the worst case
    for (const auto& e : b.entries()) {
        double bound = C * std::pow(b.N(), 1 - A * (e.p - 2) / e.p + eps);
        double ratio = double(M_of_p(b, e.p)) / bound;
        if (ratio > out.worst_ratio) {
            out.worst_ratio = ratio;
            out.worst_p = e.p;
        }
    }
    out.total_linear = b.linear_total(C);
    out.has_p_max = true;
    out.pass = out.worst_ratio <= 1 && out.total_linear && out.has_p_max;
    return out;
}

bool vanishing_proxy(const std::vector<double>& seq) {
    if (seq.empty()) return true;
    if (std::all_of(seq.begin(), seq.end(), [](double v) { return v == 0; })) return true;
    for (std::size_t i = 1; i < seq.size(); ++i)
        if (!(seq[i] < seq[i - 1])) return false;
    return seq.back() < vanishing_threshold;
}

RequirementReport normal_cover_requirement(const std::vector<EigenvalueBudget>& budgets, const GrowthFunction& g) {
    if (budgets.size() < 3) fail(ErrorKind::domain, "requirement trend needs at least three covers");
    for (std::size_t i = 1; i < budgets.size(); ++i)
        if (!(budgets[i].N() > budgets[i - 1].N())) fail(ErrorKind::domain, "cover degrees must be strictly increasing");
    RequirementReport rep;
    std::vector<double> r0, ri, rl;
    for (const auto& b : budgets) {
        RequirementRow row;
        row.N = b.N();
        if (!(b.N() > 1)) fail(ErrorKind::domain, "requirement needs N > 1");
        const double gv = g(std::log(b.N()));
        if (!(gv > 0)) fail(ErrorKind::domain, "growth function must be positive on ln N");
        row.g = gv;
        auto h = [gv](double p) { return std::exp(-2 * gv / p); };
        double sum = 0, integral = 0, prev = 2;
        for (const auto& e : b.entries()) {
            sum += h(e.p) * double(e.m);
            // M is constant on (prev, p_i]; the integrand has antiderivative e^{-2g/p} / (2g)
            integral += double(M_of_p(b, e.p)) * (h(e.p) - h(prev)) / (2 * gv);
            prev = e.p;
        }
        const double M2 = double(b.total());
        row.req0 = gv * gv * gv * sum;
        row.req_integral = gv * gv * gv * integral;
        row.req_limit = gv * gv * M2 * std::exp(-gv);
        double rhs = gv * row.req_limit + 2 * gv * row.req_integral;
        row.identity_residual = std::abs(row.req0 - rhs) / std::max(row.req0, 1e-300);
        if (row.req0 > 0 && row.identity_residual > 1e-9) {
            std::ostringstream os;
            os << "summation-by-parts identity violated (relative residual " << row.identity_residual << ")";
            fail(ErrorKind::numeric, os.str());
        }
        r0.push_back(row.req0);
        ri.push_back(row.req_integral);
        rl.push_back(row.req_limit);
        rep.rows.push_back(row);
    }
    rep.req0_vanishing = vanishing_proxy(r0);
    rep.integral_vanishing = vanishing_proxy(ri);
    rep.limit_vanishing = vanishing_proxy(rl);
    return rep;
}

double lp_radius_dilation(double p, double R_X, double gamma) {
    if (!(p >= 2)) fail(ErrorKind::domain, "p must be at least 2");
    if (!(R_X > 0)) fail(ErrorKind::domain, "R_X must be positive");
    return p / 2 * (R_X + gamma * std::log(R_X));
}

std::pair<double, double> covering_norm_bounds(double N, double dimW, double ball_norm) {
    if (!(N >= 1) || !(dimW >= 0) || !(ball_norm >= 0)) fail(ErrorKind::domain, "need N >= 1, dimW >= 0, norm >= 0");
    return {ball_norm / std::sqrt(N), std::sqrt(dimW / N) * ball_norm};
}

double bound_total(double r, const EigenvalueBudget& b, double p0, double ball_norm) {
    if (!(r >= 0)) fail(ErrorKind::domain, "radius must be non-negative");
    if (!(p0 >= 2)) fail(ErrorKind::domain, "base exponent p0 must be at least 2");
    auto sq = [](double v) { return v * v; };
    const double N = b.N();
    double s = sq(spectral::hc_bound(r, p0)) / N + sq(spectral::hc_bound(r, 2));
    for (const auto& e : b.entries()) s += sq(spectral::hc_bound(r, e.p)) * double(e.m) / N;
    return sq(ball_norm) * s;
}

} // namespace hypercut::covers
