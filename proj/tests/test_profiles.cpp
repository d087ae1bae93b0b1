#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <cstring>
#include <vector>

#include "specrad/profiles.hpp"

using namespace specrad;

namespace {

// Dense real matrix power against which the matvec-based ltc sequence is
// cross-checked.
std::vector<double> dense_power_row_max(const VarianceProfile& p, int k) {
  const int n = p.n;
  std::vector<double> cur(p.s), nxt(p.s.size());
  for (int step = 1; step < k; ++step) {
    std::fill(nxt.begin(), nxt.end(), 0.0);
    for (int i = 0; i < n; ++i)
      for (int l = 0; l < n; ++l) {
        const double v = cur[i * n + l];
        if (v == 0.0) continue;
        for (int j = 0; j < n; ++j) nxt[i * n + j] += v * p.s[l * n + j];
      }
    cur.swap(nxt);
  }
  return cur;
}

double max_row_sum(const std::vector<double>& m, int n) {
  double best = 0.0;
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += m[i * n + j];
    best = std::max(best, s);
  }
  return best;
}

double max_col_sum(const std::vector<double>& m, int n) {
  std::vector<double> c(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) c[j] += m[i * n + j];
  double best = 0.0;
  for (double v : c) best = std::max(best, v);
  return best;
}

}  // namespace

TEST_CASE("homogeneous profiles") {
  const VarianceProfile p1 = make_homogeneous(1);
  CHECK(p1(0, 0) == 1.0);
  const VarianceProfile p4 = make_homogeneous(4);
  for (double v : p4.s) CHECK(v == 0.25);
  for (double rs : p4.row_sums()) CHECK(rs == doctest::Approx(1.0));
  const ProfileParams pp = params(make_homogeneous(100), 4);
  CHECK(pp.sigma == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(pp.sigma_star == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(pp.rho_s == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("block band patterns") {
  const VarianceProfile dense3 = make_block_band(3, 1, 1.0);
  for (double v : dense3.s) CHECK(v == 1.0);

  const VarianceProfile bb = make_block_band(4, 2, 1.0 / 6.0);
  for (double rs : bb.row_sums()) CHECK(rs == doctest::Approx(1.0).epsilon(1e-12));

  const VarianceProfile bz = make_block_band(4, 2, 1.0);
  for (int bi = 0; bi < 4; ++bi)
    for (int bj = 0; bj < 4; ++bj) {
      const int d = ((bj - bi) % 4 + 4) % 4;
      const bool occupied = d == 0 || d == 1 || d == 3;
      CHECK(bz(bi * 2, bj * 2) == (occupied ? 1.0 : 0.0));
    }

  CHECK_THROWS_AS(make_block_band(2, 1, 1.0), std::invalid_argument);
}

TEST_CASE("periodic band patterns") {
  const VarianceProfile full = make_periodic_band(5, 5, 0.2);
  for (double v : full.s) CHECK(v == 0.2);

  const VarianceProfile pb = make_periodic_band(8, 3, 1.0 / 3.0);
  for (int i = 0; i < 8; ++i) {
    int nonzeros = 0;
    double sum = 0.0;
    for (int j = 0; j < 8; ++j) {
      if (pb(i, j) != 0.0) ++nonzeros;
      sum += pb(i, j);
    }
    CHECK(nonzeros == 3);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }

  const VarianceProfile ident = make_periodic_band(8, 1, 1.0);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) CHECK(ident(i, j) == (i == j ? 1.0 : 0.0));

  CHECK_THROWS_AS(make_periodic_band(8, 4, 0.25), std::invalid_argument);
  CHECK_THROWS_AS(make_periodic_band(4, 5, 0.2), std::invalid_argument);
}

TEST_CASE("hetero block values and long-time control") {
  const VarianceProfile sym = make_hetero_block(2, 1.0, 1.0);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      CHECK(sym(i, j) == 0.0);
      CHECK(sym(i, 2 + j) == 0.5);
      CHECK(sym(2 + i, j) == 0.5);
      CHECK(sym(2 + i, 2 + j) == 0.0);
    }

  const VarianceProfile small = make_hetero_block(1, 2.0, 3.0);
  CHECK(small(0, 0) == 0.0);
  CHECK(small(0, 1) == 4.0);
  CHECK(small(1, 0) == 9.0);
  CHECK(small(1, 1) == 0.0);

  const ProfileParams pp = params(make_hetero_block(4, 4.0, 1.0), 4);
  CHECK(pp.sigma == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(pp.ltc_sigma_hat == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("product linearization patterns") {
  const VarianceProfile two = make_product_linearization(2, 1);
  CHECK(two(0, 0) == 0.0);
  CHECK(two(0, 1) == 1.0);
  CHECK(two(1, 0) == 1.0);
  CHECK(two(1, 1) == 0.0);

  const VarianceProfile pl = make_product_linearization(3, 2);
  for (int i = 0; i < 6; ++i) {
    int nonzeros = 0;
    double sum = 0.0;
    for (int j = 0; j < 6; ++j) {
      if (pl(i, j) != 0.0) {
        ++nonzeros;
        CHECK(pl(i, j) == 0.5);
      }
      sum += pl(i, j);
    }
    CHECK(nonzeros == 2);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
  for (double cs : pl.col_sums()) CHECK(cs == doctest::Approx(1.0).epsilon(1e-12));

  const VarianceProfile degenerate = make_product_linearization(1, 2);
  for (double v : degenerate.s) CHECK(v == 0.5);
}

TEST_CASE("nilpotent profile and its powers") {
  const VarianceProfile n2 = make_nilpotent_superdiag(2);
  CHECK(n2(0, 1) == 1.0);
  CHECK(n2(0, 0) + n2(1, 0) + n2(1, 1) == 0.0);

  const VarianceProfile n4 = make_nilpotent_superdiag(4);
  const ProfileParams pp = params(n4, 4);
  CHECK(pp.rho_s == doctest::Approx(0.0));
  CHECK(pp.ltc_sigma_hat == 0.0);
  REQUIRE(pp.ltc_sequence.size() == 4);
  CHECK(pp.ltc_sequence[0].second == doctest::Approx(1.0));
  CHECK(pp.ltc_sequence[1].second == doctest::Approx(1.0));
  CHECK(pp.ltc_sequence[2].second == doctest::Approx(1.0));
  CHECK(pp.ltc_sequence[3].second == 0.0);

  // S^n by repeated dense multiplication is exactly the zero matrix.
  const std::vector<double> sn = dense_power_row_max(n4, 4);
  for (double v : sn) CHECK(v == 0.0);
}

TEST_CASE("diagonal block profiles") {
  const VarianceProfile one = make_diag_block_ginibre(4, 4);
  for (double v : one.s) CHECK(v == 0.25);

  const VarianceProfile two = make_diag_block_ginibre(4, 2);
  CHECK(two(0, 0) == 0.5);
  CHECK(two(0, 2) == 0.0);
  CHECK(two(2, 3) == 0.5);

  const ProfileParams pp = params(make_diag_block_ginibre(6, 2), 4);
  CHECK(pp.sigma == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pp.rho_s == doctest::Approx(1.0).epsilon(1e-9));

  CHECK_THROWS_AS(make_diag_block_ginibre(6, 4), std::invalid_argument);
}

TEST_CASE("perturbed regular digraph profile") {
  const VarianceProfile unperturbed = make_perturbed_regular(16, 0.5, 0.5, 0.0);
  for (double rs : unperturbed.row_sums()) CHECK(rs == doctest::Approx(1.0).epsilon(1e-12));

  const VarianceProfile pert = make_perturbed_regular(16, 0.5, 0.5, 2.0);
  const ProfileParams pp = params(pert, 4);
  // floor(16^0.5) = 4 entries of 2/4 on row 0: max row sum 1 + 2.
  CHECK(pp.sigma * pp.sigma == doctest::Approx(3.0).epsilon(1e-12));

  // D = 0 gives exactly the unperturbed grid.
  CHECK(std::memcmp(unperturbed.s.data(), make_perturbed_regular(16, 0.5, 0.5, 0.0).s.data(),
                    unperturbed.s.size() * sizeof(double)) == 0);
}

TEST_CASE("doubly stochastic checks") {
  CHECK(is_doubly_stochastic(make_homogeneous(4), 1e-12));
  CHECK(is_doubly_stochastic(make_nilpotent_superdiag(4), 1e-12));
  CHECK_FALSE(is_doubly_stochastic(make_hetero_block(2, 2.0, 1.0), 1e-9));
}

TEST_CASE("doubly stochastic periodic band is long-time controlled by 1") {
  const ProfileParams pp = params(make_periodic_band(8, 3, 1.0 / 3.0), 6);
  CHECK(pp.sigma == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pp.ltc_sigma_hat == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("parameter chain and power bound hold across constructors") {
  std::vector<VarianceProfile> profiles;
  profiles.push_back(make_homogeneous(7));
  profiles.push_back(make_block_band(4, 2, 0.3));
  profiles.push_back(make_periodic_band(9, 3, 0.4));
  profiles.push_back(make_hetero_block(3, 1.7, 0.4));
  profiles.push_back(make_product_linearization(4, 2));
  profiles.push_back(make_nilpotent_superdiag(5));
  profiles.push_back(make_diag_block_ginibre(8, 4));
  profiles.push_back(make_perturbed_regular(25, 0.5, 0.4, 1.3));
  for (const VarianceProfile& p : profiles) {
    CAPTURE(p.label);
    const ProfileParams pp = params(p, 6);
    CHECK(pp.sigma_star <= pp.sigma + 1e-12);
    CHECK(std::sqrt(pp.rho_s) <= pp.ltc_sigma_hat + 1e-9 * std::max(1.0, pp.ltc_sigma_hat));
    CHECK(pp.ltc_sigma_hat <= pp.sigma + 1e-9 * std::max(1.0, pp.sigma));
    for (const auto& [k, mk] : pp.ltc_sequence) {
      // rho(S)^k <= max row sum of S^k.
      CHECK(pp.rho_s <= std::pow(mk, 1.0 / k) + 1e-9);
    }
    CHECK(pp.flatness.first >= 0.0);
    CHECK(pp.flatness.first <= pp.flatness.second);
  }
}

TEST_CASE("ltc sequence matches dense matrix powers") {
  std::vector<VarianceProfile> profiles;
  profiles.push_back(make_periodic_band(12, 5, 0.21));
  profiles.push_back(make_hetero_block(5, 2.0, 0.7));
  profiles.push_back(make_perturbed_regular(32, 0.5, 0.3, 2.0));
  for (const VarianceProfile& p : profiles) {
    const ProfileParams pp = params(p, 6);
    for (int k = 1; k <= 6; ++k) {
      const std::vector<double> sk = dense_power_row_max(p, k);
      const double mk = std::max(max_row_sum(sk, p.n), max_col_sum(sk, p.n));
      CHECK(pp.ltc_sequence[k - 1].second == doctest::Approx(mk).epsilon(1e-10));
    }
  }
}

TEST_CASE("profile json round-trips bit-exactly") {
  const VarianceProfile p = make_periodic_band(8, 3, 1.0 / 3.0);
  const VarianceProfile q = VarianceProfile::from_json(p.to_json());
  CHECK(q.n == p.n);
  CHECK(q.label == p.label);
  REQUIRE(q.s.size() == p.s.size());
  CHECK(std::memcmp(q.s.data(), p.s.data(), p.s.size() * sizeof(double)) == 0);
}
