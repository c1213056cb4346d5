#pragma once

#include <cstdint>

#include "besicomp/field.hpp"

namespace besicomp {

enum class ExpectationModel { Random, Star, DoubleStar };

const char* to_string(ExpectationModel m);

/// Expected all-but-simple count over unconstrained random minimal
/// arrangements: d^2 - d(d+1)(1 - 1/d)^d. Valid for d >= 2.
long double expected_random(u64 d);

/// x^e for x > 0 and integer e >= 0: square-and-multiply up to e = 64,
/// exp/log in the log domain beyond that.
long double pow_uint(long double x, u64 e);

/// On-axis simple-point probability of the constrained models, for a
/// non-origin point of one of the axis lines (x=0, y=0, y=x).
/// Star requires d == 1 mod 6 and d >= 7; DoubleStar d == 5 mod 6 and
/// d >= 5. Incompatible d throws std::invalid_argument.
long double prob_simple_axis(u64 d, ExpectationModel model);

/// Off-axis simple-point probability: sum over the line families of the
/// chance that exactly one line covers the point. The final family's weight
/// vanishes at the smallest compatible d; the zero weight short-circuits
/// before its (then negative) exponent would be raised.
long double prob_simple_offaxis(u64 d, ExpectationModel model);

struct ExpectationReport {
    u64 d = 0;
    ExpectationModel model = ExpectationModel::Random;
    long double value = 0;
    long double asymptotic_main = 0; // (1-1/e)d^2 plus the model's linear term
    long double residual = 0;        // value - asymptotic_main
};

/// Constrained-model expectation assembled from the two probabilities:
/// d^2 - [(3d-3)*prob_simple_axis + (d^2-3d+2)*prob_simple_offaxis]
/// (the origin is never simple and contributes nothing to the bracket).
/// The result is cross-checked against transcribed_constrained to 1e-9
/// relative error; disagreement throws std::logic_error.
ExpectationReport expected_constrained(u64 d, ExpectationModel model);

/// The same expectation evaluated through the independently transcribed
/// closed forms; kept permanently as the mutual oracle of
/// expected_constrained.
long double transcribed_constrained(u64 d, ExpectationModel model);

/// Constrained-model expectation under a coarser point bookkeeping: all
/// 3d-2 axis-line points (origin included) take the on-axis probability,
/// the through-origin pair contributes one extra crossing-point factor
/// there, and each three-line family is counted as covering 3(d-1)
/// off-axis cells (the through-origin pair as 2d). This is the variant the
/// reference residual statistics are built on; see stats::residual_series.
long double coarse_constrained(u64 d, ExpectationModel model);

ExpectationReport coarse_constrained_report(u64 d, ExpectationModel model);

/// asymptotic_main for a model: (1-1/e)d^2 - d/(2e) for Random,
/// (1-1/e)d^2 + (1/e - 3exp(-1/2))d for the constrained models.
long double asymptotic_main(u64 d, ExpectationModel model);

/// expected_random(d) + lambda * d.
long double estimator_c_hat(u64 d, long double lambda);

ExpectationReport expected_random_report(u64 d);

} // namespace besicomp
