#pragma once

namespace besicomp {

/// Standard normal CDF, via erfc.
double normal_cdf(double z);

/// Standard normal quantile (Wichura's PPND16 rational approximation,
/// accurate to ~1e-16 over (0, 1)). Throws std::domain_error outside (0, 1).
double normal_quantile(double p);

/// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double regularized_incomplete_beta(double a, double b, double x);

/// Student-t CDF with df degrees of freedom.
double student_t_cdf(double t, double df);

/// Student-t quantile by bisection on the CDF.
double student_t_quantile(double p, double df);

} // namespace besicomp
