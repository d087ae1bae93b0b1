#pragma once

namespace specrad {

// Regularized lower incomplete gamma P(a,x) = gamma(a,x)/Gamma(a) for a > 0,
// x >= 0.  Series for x < a+1, continued fraction otherwise; at least 12
// significant digits over the range used here.
double gamma_p(double a, double x);

// Regularized upper incomplete gamma Q(a,x) = 1 - P(a,x), computed directly
// so that tiny tails keep relative accuracy.
double gamma_q(double a, double x);

// log(P(a,x)), safe against underflow of P itself.
double log_gamma_p(double a, double x);

// Standard Gumbel distribution function exp(-exp(-x)).
double gumbel_cdf(double x);

// Inverse standard normal CDF (Acklam's rational approximation with one
// Halley refinement; ~1e-15 relative).
double normal_quantile(double p);

}  // namespace specrad
