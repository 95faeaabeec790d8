#pragma once

#include "hypercut/geometry.hpp"
#include "hypercut/parallel.hpp"

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

namespace hypercut::modular {

// Finite cover of Gamma(2)\H given by permutations of the sheets attached to the free
// generators A = [[1,2],[0,1]] and B = [[1,0],[2,1]]. Sheets act on the right: j.A = sigma_A[j].
// Permutations are stored 0-based.
struct RandomCover {
    int n = 1;
    std::vector<int> sigma_A{0};
    std::vector<int> sigma_B{0};

    RandomCover() = default;
    RandomCover(std::vector<int> a, std::vector<int> b);
    bool transitive() const;
    std::vector<int> inverse_A() const;
    std::vector<int> inverse_B() const;
};

RandomCover random_cover(int n, Rng& rng);

// Number of (sigma_A, sigma_B) pairs in S_n x S_n generating a transitive action (n <= 5).
std::int64_t count_transitive_pairs(int n);

// Free-group letter: generator 'A' or 'B' with a signed exponent.
using Letter = std::pair<char, std::int64_t>;

// Reduction into the Gamma(2) domain |x| <= 1, |z -+ 1/2| >= 1/2. The visitor sees each
// applied generator power in order.
template <class Visitor>
geom::PointH reduce_gamma2(geom::PointH z, Visitor&& visit, long max_iter = 1000000);

bool in_gamma2_domain(const geom::PointH& z, double tol = 1e-12);

// Sheet transfer: a point of sheet j reduced by the word w_m ... w_1 (applied left to
// right as listed) lands on sheet j . w_1^{-1} ... w_m^{-1}.
class SheetTransfer {
public:
    explicit SheetTransfer(const RandomCover& cover);
    int apply(int sheet, const Letter& applied) const;
    int apply_word(int sheet, const std::vector<Letter>& applied) const;

private:
    const RandomCover* cover_;
    std::vector<int> inv_A_, inv_B_;
};

struct CoverPoint {
    geom::PointH z;
    int sheet;
};

CoverPoint cover_step(const CoverPoint& p, double r1, double theta, const SheetTransfer& transfer);

struct SheetMixingProbe {
    std::vector<double> tv;   // TV of the sheet marginal against uniform, per step 0..k
    double rate = NAN;        // fitted per-step contraction of the TV
    double effective_p = NAN; // p with (r1 + 1) e^{-r1/p} equal to the rate
    std::size_t fit_points = 0;
};

SheetMixingProbe sheet_mixing_probe(const RandomCover& cover, double r1, int k, std::size_t n_walkers,
                                    std::uint64_t seed, unsigned workers);

[[noreturn]] void throw_gamma2_cap();

template <class Visitor>
geom::PointH reduce_gamma2(geom::PointH z, Visitor&& visit, long max_iter) {
    double x = z.x(), y = z.y();
    for (long it = 0; it < max_iter; ++it) {
        double m = std::nearbyint(x / 2);
        if (m != 0) {
            x -= 2 * m;
            visit(Letter{'A', std::int64_t(-m)});
        }
        double r2 = x * x + y * y;
        if ((x - 0.5) * (x - 0.5) + y * y < 0.25) {
            double den = (1 - 2 * x) * (1 - 2 * x) + 4 * y * y;
            x = (x - 2 * r2) / den;
            y = y / den;
            visit(Letter{'B', -1});
            continue;
        }
        if ((x + 0.5) * (x + 0.5) + y * y < 0.25) {
            double den = (1 + 2 * x) * (1 + 2 * x) + 4 * y * y;
            x = (x + 2 * r2) / den;
            y = y / den;
            visit(Letter{'B', 1});
            continue;
        }
        if (std::abs(x) <= 1) return {x, y};
    }
    throw_gamma2_cap();
}

} // namespace hypercut::modular
