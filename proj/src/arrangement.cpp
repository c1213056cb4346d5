#include "besicomp/arrangement.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <new>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>

namespace besicomp {

Line make_line(const PrimeField& field, u64 A, u64 B, u64 C) {
    A %= field.modulus();
    B %= field.modulus();
    C %= field.modulus();
    if (A == 0 && B == 0) throw std::invalid_argument("make_line: degenerate coefficients");
    const u64 scale = field.inv(A != 0 ? A : B);
    return Line{static_cast<u32>(field.mul(A, scale)), static_cast<u32>(field.mul(B, scale)),
                static_cast<u32>(field.mul(C, scale))};
}

bool Arrangement::is_minimal(const PrimeField& field) const {
    if (lines.size() != d + 1) return false;
    std::vector<bool> seen(d + 1, false); // slot d = vertical
    for (const Line& ln : lines) {
        const u64 dir = ln.vertical() ? d : ln.slope(field);
        if (seen[dir]) return false;
        seen[dir] = true;
    }
    return true;
}

Arrangement build_pv_arrangement(const PrimeField& field, const FermatPoly& p) {
    const u64 d = field.modulus();
    if (d > kMaxModulus) {
        throw std::invalid_argument("build_pv_arrangement: modulus " + std::to_string(d) +
                                    " exceeds supported limit " + std::to_string(kMaxModulus));
    }
    Arrangement arr;
    arr.d = d;
    arr.lines.reserve(d + 1);
    for (u64 a = 0; a < d; ++a) {
        // a*x - (a+1)*y - p(a) = 0
        arr.lines.push_back(make_line(field, a, field.neg(field.add(a, 1 % d)), field.neg(p(a))));
    }
    arr.lines.push_back(make_line(field, 1, field.neg(1 % d), 0)); // x - y = 0
    return arr;
}

Arrangement build_pv_arrangement(u64 d) {
    PrimeField field(d);
    FermatPoly p(field);
    return build_pv_arrangement(field, p);
}

namespace {

/// Unbiased draw from [0, n), stable across platforms (mt19937_64 output is
/// fully specified; std::uniform_int_distribution is not).
u64 uniform_below(std::mt19937_64& gen, u64 n) {
    const u64 limit = std::numeric_limits<u64>::max() - std::numeric_limits<u64>::max() % n;
    u64 x;
    do {
        x = gen();
    } while (x >= limit);
    return x % n;
}

} // namespace

Arrangement sample_random_arrangement(const PrimeField& field, u64 seed) {
    const u64 d = field.modulus();
    std::mt19937_64 gen(seed);
    Arrangement arr;
    arr.d = d;
    arr.lines.reserve(d + 1);
    for (u64 m = 0; m < d; ++m) {
        // slope m, uniform offset: y = m*x + c  <=>  m*x - y + c = 0
        const u64 c = uniform_below(gen, d);
        arr.lines.push_back(make_line(field, m, field.neg(1 % d), c));
    }
    const u64 x0 = uniform_below(gen, d);
    arr.lines.push_back(make_line(field, 1, 0, field.neg(x0))); // x = x0
    return arr;
}

MultiplicityGrid multiplicity_grid(const Arrangement& arr) {
    const u64 d = arr.d;
    PrimeField field(d);
    MultiplicityGrid grid;
    grid.d = d;
    try {
        grid.counts.assign(d * d, 0);
    } catch (const std::bad_alloc&) {
        throw std::runtime_error("multiplicity_grid: cannot allocate " + std::to_string(d) + "x" +
                                 std::to_string(d) + " grid");
    }

    // Row sweep: for each x, bump the cell of every non-vertical line in that
    // row, then advance each line's y by its slope. Keeps all writes within
    // one d-sized row while it is hot.
    struct LineState { u32 y, m; };
    std::vector<LineState> sweep;
    std::vector<u32> verticals;
    sweep.reserve(arr.lines.size());
    for (const Line& ln : arr.lines) {
        if (ln.vertical()) {
            verticals.push_back(static_cast<u32>(ln.vertical_x(field)));
        } else {
            const u64 binv = field.inv(ln.b);
            const u64 m = field.mul(field.neg(ln.a), binv);   // y = m*x + c
            const u64 c = field.mul(field.neg(ln.c), binv);
            sweep.push_back({static_cast<u32>(c), static_cast<u32>(m)});
        }
    }
    const u32 du = static_cast<u32>(d);
    for (u64 x = 0; x < d; ++x) {
        std::uint16_t* row = grid.counts.data() + x * d;
        for (LineState& s : sweep) {
            ++row[s.y];
            s.y += s.m;
            if (s.y >= du) s.y -= du;
        }
    }
    for (u32 x0 : verticals) {
        std::uint16_t* row = grid.counts.data() + u64(x0) * d;
        for (u64 y = 0; y < d; ++y) ++row[y];
    }

    grid.histogram.assign(arr.lines.size() + 1, 0);
    for (std::uint16_t c : grid.counts) ++grid.histogram[c];
    while (grid.histogram.size() > 1 && grid.histogram.back() == 0) grid.histogram.pop_back();
    return grid;
}

u64 all_but_simple_count(const MultiplicityGrid& grid) {
    const u64 simple = grid.histogram.size() > 1 ? grid.histogram[1] : 0;
    return grid.d * grid.d - simple;
}

u64 complexity(u64 d) {
    if (d == 2) {
        throw std::invalid_argument(
            "complexity: d = 2 is refused; direct counting yields 4 points of multiplicity != 1, "
            "which does not match the reference table value C_2 = 1");
    }
    if (d < 3) throw std::invalid_argument("complexity: modulus must be a prime >= 3");
    return all_but_simple_count(multiplicity_grid(build_pv_arrangement(d)));
}

std::vector<u64> primes_in_range(u64 lo, u64 hi) {
    std::vector<u64> out;
    if (hi < 2 || hi < lo) return out;
    if (hi > 10'000'000) {
        throw std::invalid_argument("primes_in_range: upper bound " + std::to_string(hi) +
                                    " exceeds the sieve limit 10000000");
    }
    std::vector<bool> composite(hi + 1, false);
    for (u64 i = 2; i * i <= hi; ++i) {
        if (!composite[i]) {
            for (u64 j = i * i; j <= hi; j += i) composite[j] = true;
        }
    }
    for (u64 i = std::max<u64>(lo, 2); i <= hi; ++i) {
        if (!composite[i]) out.push_back(i);
    }
    return out;
}

MonteCarloEstimate monte_carlo_all_but_simple(u64 d, u64 samples, u64 seed) {
    if (samples < 1) throw std::invalid_argument("monte_carlo_all_but_simple: need samples >= 1");
    PrimeField field(d);
    double mean = 0, m2 = 0;
    for (u64 k = 0; k < samples; ++k) {
        const Arrangement arr = sample_random_arrangement(field, seed + k);
        const double value = static_cast<double>(all_but_simple_count(multiplicity_grid(arr)));
        const double delta = value - mean;
        mean += delta / static_cast<double>(k + 1);
        m2 += delta * (value - mean);
    }
    const double variance = samples > 1 ? m2 / static_cast<double>(samples - 1) : 0.0;
    return MonteCarloEstimate{d, samples, seed, mean,
                              std::sqrt(variance / static_cast<double>(samples))};
}

std::vector<ComplexityRow> complexity_range(u64 lo, u64 hi, unsigned workers) {
    std::vector<u64> primes = primes_in_range(std::max<u64>(lo, 3), hi);
    std::vector<ComplexityRow> rows(primes.size());
    if (primes.empty()) return rows;

    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(primes.size()));

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::string error_message;
    std::mutex error_mutex;

    auto work = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= primes.size() || failed.load()) break;
            try {
                const u64 d = primes[i];
                MultiplicityGrid grid = multiplicity_grid(build_pv_arrangement(d));
                rows[i] = ComplexityRow{d, all_but_simple_count(grid), std::move(grid.histogram)};
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(error_mutex);
                failed.store(true);
                if (error_message.empty()) error_message = e.what();
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (failed.load()) throw std::runtime_error("complexity_range: " + error_message);
    return rows;
}

} // namespace besicomp
