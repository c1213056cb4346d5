#pragma once

#include <cstdint>
#include <vector>

#include "besicomp/field.hpp"

namespace besicomp {

/// A line in F_d^2, stored as the canonical triple (a, b, c) of
/// a*x + b*y + c = 0: the first nonzero of (a, b) is scaled to 1, so two
/// lines are equal iff their triples are equal. Vertical iff b == 0.
struct Line {
    u32 a = 0;
    u32 b = 0;
    u32 c = 0;

    bool vertical() const { return b == 0; }
    bool through_origin() const { return c == 0; }

    /// Slope in F_d; pre: !vertical().
    u64 slope(const PrimeField& field) const {
        return field.mul(field.neg(a), field.inv(b));
    }
    /// x-coordinate of a vertical line; pre: vertical() (then a == 1).
    u64 vertical_x(const PrimeField& field) const { return field.neg(c); }

    bool contains(const PrimeField& field, u64 x, u64 y) const {
        return field.add(field.add(field.mul(a, x), field.mul(b, y)), c) == 0;
    }

    friend bool operator==(const Line&, const Line&) = default;
};

/// Canonicalize coefficients (A, B, C), throwing if (A, B) == (0, 0).
Line make_line(const PrimeField& field, u64 A, u64 B, u64 C);

/// Sentinel for the label usually written as infinity; its line is stored in
/// the arrangement's last slot (lines[d]).
inline constexpr u32 kInfinityLabel = 0xffffffffu;

/// A minimal Besicovitch arrangement: exactly d+1 lines, one per direction
/// of P^1(F_d). `lines[i]` for i < d is the line labelled i; `lines[d]` is
/// the line labelled infinity. For the canonical arrangement, label a
/// carries a*x - (a+1)*y - p(a) = 0 and infinity carries x - y = 0; for
/// random arrangements label i carries the line of slope i and infinity the
/// vertical line.
struct Arrangement {
    u64 d = 0;
    std::vector<Line> lines;

    const Line& line(u32 label) const {
        return label == kInfinityLabel ? lines[d] : lines[label];
    }

    /// True iff there are exactly d+1 lines with pairwise distinct directions.
    bool is_minimal(const PrimeField& field) const;
};

/// The arrangement {L_a : a*x - (a+1)*y - p(a) = 0} plus {x - y = 0}, where p
/// is the Fermat-quotient table. Pre: d >= 2 prime.
Arrangement build_pv_arrangement(const PrimeField& field, const FermatPoly& p);
Arrangement build_pv_arrangement(u64 d);

/// One line per direction with a uniformly random offset (d candidates per
/// direction). Deterministic for a fixed seed; the generator is a seeded
/// mt19937_64 with rejection sampling, so results are stable across
/// platforms and standard libraries.
Arrangement sample_random_arrangement(const PrimeField& field, u64 seed);

/// d x d table of line-incidence counts plus its multiplicity histogram.
/// counts[x*d + y] = number of arrangement lines through (x, y);
/// histogram[m] = number of points of multiplicity m.
struct MultiplicityGrid {
    u64 d = 0;
    std::vector<std::uint16_t> counts;
    std::vector<u64> histogram;

    u64 count_at(u64 x, u64 y) const { return counts[x * d + y]; }
};

/// Rasterize every line of the arrangement (d cell visits per line, O(d^2)
/// total). Throws std::runtime_error naming d if the grid cannot be
/// allocated.
MultiplicityGrid multiplicity_grid(const Arrangement& arr);

/// Number of points whose multiplicity differs from 1 (i.e. 0 or >= 2):
/// d^2 minus the histogram entry at multiplicity 1.
u64 all_but_simple_count(const MultiplicityGrid& grid);

/// all_but_simple_count of the canonical arrangement for prime d >= 3.
/// d == 2 is refused: the reference table value C_2 = 1 does not agree with
/// direct counting on the d = 2 arrangement (4 points of multiplicity != 1),
/// so no answer is returned for it.
u64 complexity(u64 d);

struct ComplexityRow {
    u64 d = 0;
    u64 count = 0;
    std::vector<u64> histogram;
};

/// complexity() for every prime in [lo, hi], fanned out across `workers`
/// threads (0 = hardware concurrency; one grid per in-flight prime). Rows
/// are returned in increasing prime order. d == 2 is skipped.
std::vector<ComplexityRow> complexity_range(u64 lo, u64 hi, unsigned workers = 0);

/// Primes in [lo, hi] by sieve.
std::vector<u64> primes_in_range(u64 lo, u64 hi);

struct MonteCarloEstimate {
    u64 d = 0;
    u64 samples = 0;
    u64 seed = 0;
    double mean = 0;
    double std_error = 0;
};

/// Sample mean and standard error of all_but_simple_count over `samples`
/// random minimal arrangements; sample k uses seed + k.
MonteCarloEstimate monte_carlo_all_but_simple(u64 d, u64 samples, u64 seed);

/// Largest supported modulus: multiplicities must fit the 16-bit counters
/// and the grid must stay addressable.
inline constexpr u64 kMaxModulus = 65521;

} // namespace besicomp
