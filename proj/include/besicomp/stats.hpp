#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "besicomp/expectation.hpp"
#include "besicomp/field.hpp"

namespace besicomp {

/// Normalized residual (C_d - E_d)/d for one prime, where E is the model
/// expectation.
struct ResidualEntry {
    u64 d = 0;
    double residual = 0;
};

struct ResidualSeries {
    ExpectationModel model = ExpectationModel::Random;
    std::vector<ResidualEntry> entries; // strictly increasing primes

    double mean() const;
    std::vector<double> residuals() const;
};

/// Assembled result of one test: named statistics, the 5%-risk decision
/// region, and the decision.
struct StatReport {
    std::string test;
    std::vector<std::pair<std::string, double>> statistics;
    std::optional<double> p_value;
    std::optional<std::pair<double, double>> acceptance_region;
    bool accept = false;
    std::string note;

    double stat(const std::string& name) const; // throws if absent
};

/// Ordinary least squares of residual against prime, with the slope t-test:
/// T = s / sigma_s, sigma_s = sqrt((SSE/(n-2))/S_xx), two-sided Student-t
/// region at 5% with n-2 degrees of freedom. A perfect fit (SSE == 0) sets
/// the infinite-T note instead of dividing by zero. Fewer than 3 points or
/// zero x-variance throws std::invalid_argument.
StatReport ols_slope_test(const ResidualSeries& series);

/// Shapiro-Wilk W and p-value for 3 <= n <= 5000 (Royston's 1995 algorithm:
/// Blom-score coefficients with polynomial corrections, normalizing
/// transformation of W for the p-value). Identical values throw
/// std::invalid_argument, as do sizes out of range.
StatReport shapiro_wilk(std::span<const double> values);

enum class RankKey { AbsValue, AbsDeviation, PrimeIndex };

const char* to_string(RankKey key);

/// Mann-Whitney scatter test: entries split into the groups above and below
/// `lambda`, everything ranked by the chosen key (midranks on ties), and the
/// above-group rank sum standardized:
///   z = (R - n1(n+1)/2) / sqrt(n1 n2 (n+1) / 12)
/// against the two-sided 5% normal region. An empty group throws
/// std::invalid_argument.
///
/// Keys: AbsValue ranks |residual|; AbsDeviation ranks |residual - lambda|
/// (the variant that reproduces the reference z of -0.911 on the random
/// model); PrimeIndex ranks by position in the prime sequence.
StatReport mann_whitney_scatter(const ResidualSeries& series, double lambda, RankKey key);

/// One row of the complexity reference table.
struct ComplexityEntry {
    u64 d = 0;
    u64 count = 0;
};

/// Residual series for a model from a complexity table (d, C_d):
///  - Random: all table rows, E = expected_random;
///  - Star / DoubleStar: the rows whose prime classifies as star resp.
///    double_star, E = coarse_constrained (the bookkeeping variant the
///    reference statistics were built on).
ResidualSeries residual_series(ExpectationModel model,
                               std::span<const ComplexityEntry> table);

struct HistogramBin {
    double start = 0;
    u64 count = 0;
};

/// Left-closed right-open bins of the given width anchored at `anchor`,
/// covering the contiguous range from the lowest to the highest occupied
/// bin. Counts sum to the input length. Empty input yields an empty
/// histogram. Throws std::invalid_argument for non-positive width.
std::vector<HistogramBin> histogram(std::span<const double> values, double bin_width,
                                    double anchor);

} // namespace besicomp
