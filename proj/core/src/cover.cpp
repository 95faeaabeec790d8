#include "hypercut/cover.hpp"

#include "hypercut/error.hpp"
#include "hypercut/stats.hpp"

#include <algorithm>
#include <numeric>

namespace hypercut::modular {

namespace {

void check_perm(const std::vector<int>& p, int n) {
    std::vector<char> seen(std::size_t(n), 0);
    for (int v : p) {
        if (v < 0 || v >= n || seen[std::size_t(v)]) fail(ErrorKind::domain, "sheet map is not a permutation");
        seen[std::size_t(v)] = 1;
    }
}

std::vector<int> invert(const std::vector<int>& p) {
    std::vector<int> inv(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) inv[std::size_t(p[i])] = int(i);
    return inv;
}

bool transitive_pair(const std::vector<int>& a, const std::vector<int>& b) {
    const std::size_t n = a.size();
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
        int j = stack.back();
        stack.pop_back();
        // the orbit of a finite permutation group is closed under the forward maps alone
        for (int k : {a[std::size_t(j)], b[std::size_t(j)]}) {
            if (!seen[std::size_t(k)]) {
                seen[std::size_t(k)] = 1;
                ++count;
                stack.push_back(k);
            }
        }
    }
    return count == n;
}

} // namespace

void throw_gamma2_cap() { fail(ErrorKind::numeric, "Gamma(2) reduction exceeded the iteration cap"); }

RandomCover::RandomCover(std::vector<int> a, std::vector<int> b)
    : n(int(a.size())), sigma_A(std::move(a)), sigma_B(std::move(b)) {
    if (n < 1 || sigma_B.size() != sigma_A.size()) fail(ErrorKind::domain, "cover needs two permutations of equal size");
    check_perm(sigma_A, n);
    check_perm(sigma_B, n);
}

bool RandomCover::transitive() const { return transitive_pair(sigma_A, sigma_B); }
std::vector<int> RandomCover::inverse_A() const { return invert(sigma_A); }
std::vector<int> RandomCover::inverse_B() const { return invert(sigma_B); }

RandomCover random_cover(int n, Rng& rng) {
    if (n < 1) fail(ErrorKind::domain, "cover degree must be at least 1");
    auto shuffle = [&](std::vector<int>& p) {
        std::iota(p.begin(), p.end(), 0);
        for (int i = n - 1; i > 0; --i) {
            std::uniform_int_distribution<int> pick(0, i);
            std::swap(p[std::size_t(i)], p[std::size_t(pick(rng))]);
        }
    };
    std::vector<int> a(static_cast<std::size_t>(n)), b(static_cast<std::size_t>(n));
    shuffle(a);
    shuffle(b);
    return {a, b};
}

std::int64_t count_transitive_pairs(int n) {
    if (n < 1 || n > 5) fail(ErrorKind::capacity, "exhaustive pair count supports n <= 5");
    std::vector<std::vector<int>> perms;
    std::vector<int> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    do perms.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    std::int64_t count = 0;
    for (const auto& a : perms)
        for (const auto& b : perms)
            if (transitive_pair(a, b)) ++count;
    return count;
}

bool in_gamma2_domain(const geom::PointH& z, double tol) {
    double x = z.x(), y = z.y();
    return std::abs(x) <= 1 + tol && (x - 0.5) * (x - 0.5) + y * y >= 0.25 - tol &&
           (x + 0.5) * (x + 0.5) + y * y >= 0.25 - tol;
}

SheetTransfer::SheetTransfer(const RandomCover& cover)
    : cover_(&cover), inv_A_(cover.inverse_A()), inv_B_(cover.inverse_B()) {}

int SheetTransfer::apply(int sheet, const Letter& applied) const {
    // j . g^{-1} for g = X^e is sigma_X^{-e}(j)
    const auto& fwd = applied.first == 'A' ? cover_->sigma_A : cover_->sigma_B;
    const auto& inv = applied.first == 'A' ? inv_A_ : inv_B_;
    if (applied.first != 'A' && applied.first != 'B') fail(ErrorKind::domain, "unknown generator letter");
    std::int64_t e = applied.second;
    const auto& map = e > 0 ? inv : fwd;
    std::int64_t steps = e > 0 ? e : -e;
    if (steps > cover_->n) {
        std::int64_t len = 1;
        for (int j = map[std::size_t(sheet)]; j != sheet; j = map[std::size_t(j)]) ++len;
        steps %= len;
    }
    for (std::int64_t s = 0; s < steps; ++s) sheet = map[std::size_t(sheet)];
    return sheet;
}

int SheetTransfer::apply_word(int sheet, const std::vector<Letter>& applied) const {
    for (const auto& l : applied) sheet = apply(sheet, l);
    return sheet;
}

CoverPoint cover_step(const CoverPoint& p, double r1, double theta, const SheetTransfer& transfer) {
    auto z = geom::sphere_point(p.z, r1, theta);
    int sheet = p.sheet;
    auto red = reduce_gamma2(z, [&](const Letter& l) { sheet = transfer.apply(sheet, l); });
    return {red, sheet};
}

SheetMixingProbe sheet_mixing_probe(const RandomCover& cover, double r1, int k, std::size_t n_walkers,
                                    std::uint64_t seed, unsigned workers) {
    if (k < 0 || n_walkers == 0) fail(ErrorKind::domain, "probe needs k >= 0 and walkers");
    const std::size_t n = std::size_t(cover.n);
    const std::size_t nb = block_count(n_walkers);
    std::vector<std::vector<std::uint64_t>> counts(nb, std::vector<std::uint64_t>(std::size_t(k + 1) * n, 0));
    SheetTransfer transfer(cover);
    for_each_block(n_walkers, block_size, workers, [&](std::size_t b, std::size_t lo, std::size_t hi) {
        Rng rng = block_rng(seed, 7, b);
        auto& c = counts[b];
        for (std::size_t w = lo; w < hi; ++w) {
            CoverPoint p{geom::PointH::i(), 0};
            c[std::size_t(p.sheet)]++;
            for (int s = 1; s <= k; ++s) {
                p = cover_step(p, r1, M_PI * uniform01(rng), transfer);
                c[std::size_t(s) * n + std::size_t(p.sheet)]++;
            }
        }
    });
    SheetMixingProbe out;
    out.tv.assign(std::size_t(k + 1), 0.0);
    for (int s = 0; s <= k; ++s) {
        double tv = 0;
        for (std::size_t j = 0; j < n; ++j) {
            std::uint64_t cnt = 0;
            for (std::size_t b = 0; b < nb; ++b) cnt += counts[b][std::size_t(s) * n + j];
            tv += std::abs(double(cnt) / double(n_walkers) - 1.0 / double(n));
        }
        out.tv[std::size_t(s)] = tv;
    }
    // fit only above the sampling noise floor
    const double floor = 5.0 * std::sqrt(double(n) / double(n_walkers));
    std::vector<double> xs, ys;
    for (int s = 1; s <= k; ++s)
        if (out.tv[std::size_t(s)] > floor) {
            xs.push_back(double(s));
            ys.push_back(std::log(out.tv[std::size_t(s)]));
        }
    out.fit_points = xs.size();
    if (xs.size() >= 3) {
        auto fit = stats::linear_fit(xs, ys);
        out.rate = std::exp(fit.slope);
        if (out.rate < r1 + 1 && out.rate > 0) out.effective_p = r1 / std::log((r1 + 1) / out.rate);
    }
    return out;
}

} // namespace hypercut::modular
