#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hypercut::covers {

struct BudgetEntry {
    double p;      // > 2
    long long m;   // multiplicity >= 1
};

// Exceptional-eigenvalue budget of a degree-N cover, as (p_i, m_i) with p_i strictly increasing.
class EigenvalueBudget {
public:
    EigenvalueBudget(std::vector<BudgetEntry> entries, double N, std::string label = {});
    const std::vector<BudgetEntry>& entries() const noexcept { return entries_; }
    double N() const noexcept { return N_; }
    const std::string& label() const noexcept { return label_; }
    long long total() const;
    // true when sum m_i <= C N
    bool linear_total(double C = 1.0) const { return double(total()) <= C * N_; }

    // m(p_i) = round(N^{2/p_i}) on the given grid: the A = 1 extremal profile
    static EigenvalueBudget synthetic_a1(double N, const std::vector<double>& p_grid);
    // M(p) = N for every p up to p_max
    static EigenvalueBudget uniform(double N, double p_max);

private:
    std::vector<BudgetEntry> entries_;
    double N_;
    std::string label_;
};

// M(p) = sum of m_i over p_i >= p.
long long M_of_p(const EigenvalueBudget& b, double p);

// g(R) = s R + delta ln R + c
struct GrowthFunction {
    double s = 1, delta = 0, c = 0;
    double operator()(double R) const;
    // g(R) >= R + delta0 ln R on [R0, R_hi] (sampled)
    bool dominates(double delta0, double R0, double R_hi) const;
};

struct DensityCheck {
    bool pass = true;
    double worst_p = 0;      // breakpoint with the largest ratio M(p) / bound(p)
    double worst_ratio = 0;
    bool total_linear = true; // sum m_i <= C N
    bool has_p_max = true;    // some finite p with M = 0
    double A = 1, eps = 0, C = 1;
};

// M(p) <= C N^{1 - A(p-2)/p + eps} at every breakpoint, plus the two side conditions.
DensityCheck density_condition_check(const EigenvalueBudget& b, double A, double eps, double C = 1.0);

struct RequirementRow {
    double N = 0, g = 0;
    double req0 = 0;       // g^3 sum e^{-2g/p_i} m_i
    double req_integral = 0; // g^3 int_2 M(p) e^{-2g/p} p^{-2} dp
    double req_limit = 0;  // g^2 M(2+) e^{-g}
    double identity_residual = 0; // |req0 - g req_limit - 2g req_integral| / max(req0, tiny)
};

struct RequirementReport {
    std::vector<RequirementRow> rows;
    // desk-scale o(1) proxy: strictly decreasing over the supplied N and final value < 0.1
    bool req0_vanishing = false, integral_vanishing = false, limit_vanishing = false;
    bool pass() const { return req0_vanishing && integral_vanishing && limit_vanishing; }
};

constexpr double vanishing_threshold = 0.1;

bool vanishing_proxy(const std::vector<double>& seq);

RequirementReport normal_cover_requirement(const std::vector<EigenvalueBudget>& budgets, const GrowthFunction& g);

// r' = (p/2)(R_X + gamma ln R_X)
double lp_radius_dilation(double p, double R_X, double gamma);

// (N^{-1/2} b, sqrt(dimW / N) b)
std::pair<double, double> covering_norm_bounds(double N, double dimW, double ball_norm);

// b^2 [hc(r, p0)^2 / N + hc(r, 2)^2 + sum hc(r, p_i)^2 m_i / N]: the squared-norm budget of A_r
// applied to a ball indicator split along the invariant, Ramanujan and exceptional parts.
double bound_total(double r, const EigenvalueBudget& b, double p0, double ball_norm = 1.0);

} // namespace hypercut::covers
