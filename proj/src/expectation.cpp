#include "besicomp/expectation.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace besicomp {

const char* to_string(ExpectationModel m) {
    switch (m) {
        case ExpectationModel::Random: return "random";
        case ExpectationModel::Star: return "star";
        case ExpectationModel::DoubleStar: return "double_star";
    }
    return "?";
}

long double pow_uint(long double x, u64 e) {
    if (e > 64) return std::exp(static_cast<long double>(e) * std::log(x));
    long double r = 1.0L, b = x;
    while (e) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

long double expected_random(u64 d) {
    if (d < 2) throw std::invalid_argument("expected_random: d must be >= 2");
    const long double dd = static_cast<long double>(d);
    return dd * dd - dd * (dd + 1) * pow_uint(1.0L - 1.0L / dd, d);
}

namespace {

void check_compatible(u64 d, ExpectationModel model, const char* where) {
    if (model == ExpectationModel::Star) {
        if (d % 6 != 1 || d < 7) {
            throw std::invalid_argument(std::string(where) + ": d = " + std::to_string(d) +
                                        " is incompatible with the star model (need d == 1 mod 6, d >= 7)");
        }
    } else if (model == ExpectationModel::DoubleStar) {
        if (d % 6 != 5 || d < 5) {
            throw std::invalid_argument(std::string(where) + ": d = " + std::to_string(d) +
                                        " is incompatible with the double-star model (need d == 5 mod 6, d >= 5)");
        }
    } else {
        throw std::invalid_argument(std::string(where) + ": constrained model required");
    }
}

u64 six_set_count(u64 d, ExpectationModel model) {
    return model == ExpectationModel::Star ? (d - 7) / 6 : (d - 5) / 6;
}

} // namespace

long double prob_simple_axis(u64 d, ExpectationModel model) {
    check_compatible(d, model, "prob_simple_axis");
    const long double dd = static_cast<long double>(d);
    return (dd - 3) / (dd - 1) * pow_uint((dd - 4) / (dd - 1), six_set_count(d, model));
}

long double prob_simple_offaxis(u64 d, ExpectationModel model) {
    check_compatible(d, model, "prob_simple_offaxis");
    const long double dd = static_cast<long double>(d);
    const u64 k = six_set_count(d, model);
    const long double n = dd * dd - 3 * dd + 2;
    const long double q = (dd * dd - 9 * dd + 26) / n;
    const long double qk = pow_uint(q, k);
    if (model == ExpectationModel::Star) {
        const long double p_no_pair = (dd * dd - 5 * dd + 4) / n;   // no through-origin line
        const long double p_no_triple = (dd * dd - 6 * dd + 11) / n;
        const long double b1 = 2 / (dd - 2) * p_no_triple * qk;
        const long double b2 = p_no_pair * (3 * (dd - 3) / n) * qk;
        // weight (d-5)(d-7) vanishes exactly at d = 7; skip before q^(k-1)
        const long double w = dd * dd - 12 * dd + 35;
        const long double b3 =
            w == 0 ? 0.0L : p_no_pair * p_no_triple * (w / n) * pow_uint(q, k - 1);
        return b1 + b2 + b3;
    }
    const long double b1 = 3 * (dd - 3) / n * qk;
    const long double w = dd * dd - 10 * dd + 25; // (d-5)^2, vanishes at d = 5
    const long double b2 =
        w == 0 ? 0.0L : (dd * dd - 6 * dd + 11) / n * (w / n) * pow_uint(q, k - 1);
    return b1 + b2;
}

long double transcribed_constrained(u64 d, ExpectationModel model) {
    check_compatible(d, model, "transcribed_constrained");
    const long double dd = static_cast<long double>(d);
    const u64 k = six_set_count(d, model);
    const long double axis_base = (dd - 4) / (dd - 1);
    const long double q = (dd * dd - 9 * dd + 26) / (dd * dd - 3 * dd + 2);
    if (model == ExpectationModel::Star) {
        const long double t1 = 3 * (dd - 3) * pow_uint(axis_base, k);
        const long double t2 = 2 * (dd * dd - 6 * dd + 11) / (dd - 2) * pow_uint(q, k);
        const long double t3 = 3 * (dd - 3) * (dd - 4) / (dd - 2) * pow_uint(q, k);
        const long double w = dd * dd - 12 * dd + 35;
        const long double t4 = w == 0 ? 0.0L
                                      : (dd - 4) * (dd * dd - 6 * dd + 11) / (dd - 2) *
                                            (w / (dd * dd - 3 * dd + 2)) * pow_uint(q, k - 1);
        return dd * dd - (t1 + t2 + t3 + t4);
    }
    const long double t1 = 3 * (dd - 3) * pow_uint(axis_base, k);
    const long double t2 = 3 * (dd - 3) * pow_uint(q, k);
    const long double w = dd * dd - 10 * dd + 25;
    const long double t3 = w == 0 ? 0.0L
                                  : (dd * dd - 6 * dd + 11) * (w / (dd * dd - 3 * dd + 2)) *
                                        pow_uint(q, k - 1);
    return dd * dd - (t1 + t2 + t3);
}

long double asymptotic_main(u64 d, ExpectationModel model) {
    const long double dd = static_cast<long double>(d);
    const long double inv_e = std::exp(-1.0L);
    if (model == ExpectationModel::Random) {
        return (1 - inv_e) * dd * dd - dd * inv_e / 2;
    }
    return (1 - inv_e) * dd * dd + (inv_e - 3 * std::exp(-0.5L)) * dd;
}

ExpectationReport expected_constrained(u64 d, ExpectationModel model) {
    check_compatible(d, model, "expected_constrained");
    const long double dd = static_cast<long double>(d);
    const long double assembled =
        dd * dd - ((3 * dd - 3) * prob_simple_axis(d, model) +
                   (dd * dd - 3 * dd + 2) * prob_simple_offaxis(d, model));
    const long double transcribed = transcribed_constrained(d, model);
    if (std::fabs(assembled - transcribed) > 1e-9L * std::fabs(transcribed)) {
        throw std::logic_error("expected_constrained: assembled and transcribed values diverge at d = " +
                               std::to_string(d));
    }
    ExpectationReport report;
    report.d = d;
    report.model = model;
    report.value = assembled;
    report.asymptotic_main = asymptotic_main(d, model);
    report.residual = assembled - report.asymptotic_main;
    return report;
}

long double coarse_constrained(u64 d, ExpectationModel model) {
    check_compatible(d, model, "coarse_constrained");
    const long double dd = static_cast<long double>(d);
    const u64 k = six_set_count(d, model);
    const long double n = dd * dd - 3 * dd + 2;
    const long double q = (dd * dd - 9 * dd + 26) / n;
    const long double qk = pow_uint(q, k);
    const long double triple_cover = 3 * (dd - 1) / n; // each three-line family: 3(d-1) cells
    const long double no_triple = 1 - triple_cover;
    const long double six_cover_once = k == 0 ? 0.0L : k * 6 * (dd - 5) / n;

    long double p_axis = (dd - 3) / (dd - 1) * pow_uint((dd - 4) / (dd - 1), k);
    long double p_off;
    if (model == ExpectationModel::Star) {
        p_axis *= (dd - 5) / (dd - 4); // one extra crossing point for the through-origin pair
        const long double pair_cover = 2 * dd / n;
        const long double no_pair = 1 - pair_cover;
        p_off = pair_cover * no_triple * qk + no_pair * triple_cover * qk +
                (k == 0 ? 0.0L : no_pair * no_triple * six_cover_once * pow_uint(q, k - 1));
    } else {
        p_off = triple_cover * qk +
                (k == 0 ? 0.0L : no_triple * six_cover_once * pow_uint(q, k - 1));
    }
    return dd * dd - ((3 * dd - 2) * p_axis + n * p_off);
}

ExpectationReport coarse_constrained_report(u64 d, ExpectationModel model) {
    ExpectationReport report;
    report.d = d;
    report.model = model;
    report.value = coarse_constrained(d, model);
    report.asymptotic_main = asymptotic_main(d, model);
    report.residual = report.value - report.asymptotic_main;
    return report;
}

long double estimator_c_hat(u64 d, long double lambda) {
    return expected_random(d) + lambda * static_cast<long double>(d);
}

ExpectationReport expected_random_report(u64 d) {
    ExpectationReport report;
    report.d = d;
    report.model = ExpectationModel::Random;
    report.value = expected_random(d);
    report.asymptotic_main = asymptotic_main(d, ExpectationModel::Random);
    report.residual = report.value - report.asymptotic_main;
    return report;
}

} // namespace besicomp
