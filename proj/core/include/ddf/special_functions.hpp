#pragma once

namespace ddf {

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double regularized_gamma_p(double a, double x);

/// CDF of a sum of `terms` i.i.d. unit-mean exponentials (a chi-squared
/// variable with 2 * terms degrees of freedom, normalized to mean `terms`).
double erlang_cdf(double x, double terms);

}  // namespace ddf
