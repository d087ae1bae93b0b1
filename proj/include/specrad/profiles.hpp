#pragma once

#include <string>
#include <utility>
#include <vector>

namespace specrad {

// Grid of entrywise variances s_ij = b_ij^2 of a random matrix with
// independent entries.  Immutable after construction; constructors enforce
// their structural patterns exactly (band zeros are exact 0.0).
struct VarianceProfile {
  int n = 0;
  std::vector<double> s;  // row-major n*n
  std::string label;

  double operator()(int i, int j) const { return s[static_cast<std::size_t>(i) * n + j]; }
  double& at(int i, int j) { return s[static_cast<std::size_t>(i) * n + j]; }

  std::vector<double> row_sums() const;
  std::vector<double> col_sums() const;

  std::string to_json() const;
  static VarianceProfile from_json(const std::string& text);
};

// Structural parameters of a profile.
//
//   sigma_star     largest entry standard deviation
//   sigma          sqrt of the maximal row/column sum
//   rho_s          Perron spectral radius of the variance grid
//   ltc_sequence   (k, m_k) with m_k = max(max row sum of S^k,
//                  max row sum of (S^t)^k), k = 1..K
//   ltc_sigma_hat  min_k m_k^(1/2k); equals 0 as soon as some m_k = 0,
//                  since then every higher power vanishes too
//   flatness       (n*min s_ij, n*max s_ij)
//   empirical_c    max_k m_k / ltc_sigma_hat^(2k); +inf when the hat is 0
//                  but some m_k is not
//
// The chain sqrt(rho_s) <= ltc_sigma_hat <= sigma always holds: the row sums
// of S^k dominate rho(S)^k, and m_1 = sigma^2.
struct ProfileParams {
  double sigma_star = 0.0;
  double sigma = 0.0;
  double rho_s = 0.0;
  std::vector<std::pair<int, double>> ltc_sequence;
  double ltc_sigma_hat = 0.0;
  std::pair<double, double> flatness{0.0, 0.0};
  double empirical_c = 0.0;
};

inline constexpr int kMaxProfileDim = 4096;

VarianceProfile make_homogeneous(int n);
// Tridiagonal-of-blocks pattern with wrap-around corner blocks; m >= 3
// because the corner-wrap pattern degenerates below that.
VarianceProfile make_block_band(int m, int b, double v);
// |i-j| <= (d-1)/2 or >= n-(d-1)/2; d odd, d <= n.
VarianceProfile make_periodic_band(int n, int d, double v);
// 2*half_n dimension, off-diagonal blocks lambda1^2/half_n (top right) and
// lambda2^2/half_n (bottom left).
VarianceProfile make_hetero_block(int half_n, double lambda1, double lambda2);
// Cyclic superdiagonal block pattern of a p-fold product linearization;
// p blocks of size q, variance 1/q on the occupied blocks.
VarianceProfile make_product_linearization(int p, int q);
VarianceProfile make_nilpotent_superdiag(int n);
// n/d diagonal blocks of size d, entries 1/d.
VarianceProfile make_diag_block_ginibre(int n, int d);
// Circulant floor(n^c_exp)-regular digraph profile plus floor(n^d_exp)
// off-diagonal perturbation entries of value D*n^(-c_exp) on row 0.
VarianceProfile make_perturbed_regular(int n, double c_exp, double d_exp, double big_d);

// Structural parameters with the long-time-control sequence truncated at K.
// Power row sums are evaluated by matrix-vector iteration against the
// all-ones vector, never by forming S^k densely.
ProfileParams params(const VarianceProfile& profile, int K);

// All row and column sums at most 1 + tol.
bool is_doubly_stochastic(const VarianceProfile& profile, double tol);

}  // namespace specrad
