#pragma once

#include <functional>
#include <map>
#include <string>

namespace specrad {

// Closed-form bound curves and exact laws, evaluated as pure functions so
// the harness can overlay them against Monte Carlo data.  Probability-type
// bounds are returned raw and may exceed 1; clamping is a display choice.
struct BoundCurve {
  std::string name;
  std::map<std::string, double> params;
  std::function<double(double)> evaluate;
};

// Expected-spectral-radius bound with free constant C:
//   (1+eps) * (sigma + 6 sigma_* sqrt(log n)/sqrt(log(1+eps)))
//          * (1 + C * sqrt(L) / sqrt((sigma/sigma_*)^2 + L)),
// with L = 6 log n / log(1+eps).
double expectation_bound_thm11(double sigma, double sigma_star, double n, double eps, double big_c);

// Tail curves; constants default to 1 where the source leaves them free.
double tail_thm14(double t, double n, double c0, double c);        // C0 n e^{-C t}
double tail_thm15(double t, double n, double c0, double c1);      // C0 n^2 e^{-C1 t}
double tail_thm16(double t, double sigma_star, double c0);        // (1+t^-3) e^{-C0 min(t^2,t^3)/sigma_*^2}
double tail_thm18(double t, double q);                            // q e^{-2t}, constant free

// Gumbel recentring of the spectral radius edge:
//   gamma_n = log n - 2 log log n - log 2pi,
//   rho = location + scale * G with G asymptotically standard Gumbel.
// Throws GammaNonpositive when gamma_n <= 0 (n below roughly 160).
struct GumbelRecentring {
  double gamma_n;
  double location;  // 1 + sqrt(gamma_n / 4n)
  double scale;     // 1 / sqrt(4 n gamma_n)
};
GumbelRecentring gumbel_recentring(double n);

// Exact distribution function of the spectral radius of the n-dimensional
// complex Ginibre ensemble (entries N_C(0, 1/n)):
//   P(rho <= a) = prod_{m=1..n} P(Gamma(m,1) <= n a^2),
// accumulated in log space with compensated summation.
double ginibre_radius_cdf(int n, double a);

// Cramer rate of the mean of rate-1 exponentials: x - 1 - log x.
double cramer_rate(double x);

// Operator-norm comparison curve, eps in (0, 1/2):
//   2(1+eps) sigma + 5(1+eps) sigma_* sqrt(log n)/sqrt(log(1+eps)).
// sigma stands in for both the row and the column term; pass the max.
double norm_bound_eq15(double sigma, double sigma_star, double n, double eps);

// Curve factory for the tabulation CLI.  Names: thm11, thm14, thm15, thm16,
// thm18, eq15, ginibre-cdf, cramer.  Missing params default to 1.
BoundCurve make_curve(const std::string& name, const std::map<std::string, double>& params);

}  // namespace specrad
