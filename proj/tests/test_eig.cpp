#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <vector>

#include "specrad/complex_mat.hpp"
#include "specrad/eig.hpp"
#include "specrad/entry_laws.hpp"
#include "specrad/profiles.hpp"
#include "specrad/rng.hpp"
#include "specrad/sampler.hpp"

using namespace specrad;

namespace {

CMat random_matrix(int n, std::uint64_t seed, double scale = 1.0) {
  rng::CounterRng r(rng::mix64(seed));
  CMat a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      a(i, j) = scale * cplx(2.0 * r.next_unit() - 1.0, 2.0 * r.next_unit() - 1.0);
  return a;
}

// Modified Gram-Schmidt on random columns; unitary by construction.
CMat random_unitary(int n, std::uint64_t seed) {
  CMat g = random_matrix(n, seed);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < j; ++k) {
      cplx dot = 0.0;
      for (int i = 0; i < n; ++i) dot += std::conj(g(i, k)) * g(i, j);
      for (int i = 0; i < n; ++i) g(i, j) -= dot * g(i, k);
    }
    double nrm = 0.0;
    for (int i = 0; i < n; ++i) nrm += std::norm(g(i, j));
    nrm = std::sqrt(nrm);
    for (int i = 0; i < n; ++i) g(i, j) /= nrm;
  }
  return g;
}

// Greedy multiset matching distance.
double eig_multiset_distance(std::vector<cplx> a, std::vector<cplx> b) {
  double worst = 0.0;
  for (const cplx& x : a) {
    std::size_t best = 0;
    double bd = 1e300;
    for (std::size_t i = 0; i < b.size(); ++i) {
      const double d = std::abs(x - b[i]);
      if (d < bd) {
        bd = d;
        best = i;
      }
    }
    worst = std::max(worst, bd);
    b.erase(b.begin() + static_cast<long>(best));
  }
  return worst;
}

}  // namespace

TEST_CASE("triangular matrices expose their diagonal") {
  CMat a(3, 3);
  a(0, 0) = 1.0;
  a(1, 1) = cplx(2.0, 1.0);
  a(2, 2) = -3.0;
  a(0, 1) = cplx(5.0, -2.0);
  a(0, 2) = 4.0;
  a(1, 2) = cplx(0.5, 0.5);
  const EigResult r = eigenvalues(a);
  CHECK(r.converged);
  const double d = eig_multiset_distance({cplx(1.0), cplx(2.0, 1.0), cplx(-3.0)}, r.values);
  CHECK(d <= 1e-12);
}

TEST_CASE("companion matrix of z^3 - 1 gives the cube roots of unity") {
  CMat c(3, 3);
  c(0, 2) = 1.0;
  c(1, 0) = 1.0;
  c(2, 1) = 1.0;
  const EigResult r = eigenvalues(c);
  CHECK(r.converged);
  const double s3 = std::sqrt(3.0) / 2.0;
  const double d = eig_multiset_distance(
      {cplx(1.0), cplx(-0.5, s3), cplx(-0.5, -s3)}, r.values);
  CHECK(d <= 1e-10);
}

TEST_CASE("nilpotent samples have zero spectrum") {
  const VarianceProfile prof = make_nilpotent_superdiag(12);
  const MatrixSample ms = sample(prof, EntryLaw::laplace(), {11, "eig-nilpotent", 0});
  for (const cplx& v : eigenvalues(ms.a).values) CHECK(std::abs(v) <= 1e-8);
}

TEST_CASE("spectral radius basics") {
  CHECK(spectral_radius(CMat::identity(5)) == doctest::Approx(1.0));
  CMat d(2, 2);
  d(0, 0) = 0.5;
  d(1, 1) = -2.0;
  CHECK(spectral_radius(d) == doctest::Approx(2.0));
}

TEST_CASE("product linearization spectral radius is a p-th root") {
  const VarianceProfile prof = make_product_linearization(3, 2);
  const MatrixSample ms = sample(prof, EntryLaw::complex_gaussian(), {13, "eig-product", 2});
  // Extract the three 2x2 blocks along the cycle and multiply them.
  auto block = [&](int bi, int bj) {
    CMat b(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) b(i, j) = ms.a(bi * 2 + i, bj * 2 + j);
    return b;
  };
  const CMat prod = matmul(matmul(block(0, 1), block(1, 2)), block(2, 0));
  const double lhs = std::pow(spectral_radius(ms.a), 3.0);
  const double rhs = spectral_radius(prod);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-7));
}

TEST_CASE("similarity invariance under random unitaries") {
  for (int n : {6, 16, 32}) {
    const CMat a = random_matrix(n, 100 + n);
    const CMat u = random_unitary(n, 200 + n);
    const CMat b = matmul(matmul(u.adjoint(), a), u);
    const double d = eig_multiset_distance(eigenvalues(a).values, eigenvalues(b).values);
    CHECK(d <= 1e-7);
  }
}

TEST_CASE("power identity rho(A^k) = rho(A)^k") {
  for (int n : {8, 24}) {
    const CMat a = random_matrix(n, 300 + n, 0.7);
    const double rho = spectral_radius(a);
    for (int k = 2; k <= 4; ++k) {
      const double rk = spectral_radius(mat_power(a, k));
      CHECK(rk == doctest::Approx(std::pow(rho, k)).epsilon(1e-6));
    }
  }
}

TEST_CASE("moment-method inequality rho(A) <= ||A^m||^(1/m)") {
  const CMat a = random_matrix(20, 77, 0.5);
  const double rho = spectral_radius(a);
  for (int m : {1, 2, 4, 8}) {
    const double bound = std::pow(operator_norm(mat_power(a, m)), 1.0 / m);
    CHECK(rho <= bound * (1.0 + 1e-9) + 1e-12);
  }
}

TEST_CASE("eigenvalue residuals via smallest singular values") {
  for (int n : {8, 32, 64}) {
    const CMat a = random_matrix(n, 400 + n);
    const EigResult r = eigenvalues(a);
    REQUIRE(r.converged);
    const double opn = operator_norm(a);
    // Five spot checks per matrix.
    for (int k = 0; k < 5; ++k) {
      const cplx lambda = r.values[static_cast<std::size_t>(k * (n - 1) / 4)];
      CHECK(smallest_singular(a, lambda) <= 1e-7 * (1.0 + opn));
    }
  }
}

TEST_CASE("operator norm: exact cases and SVD cross-check") {
  CHECK(operator_norm(CMat::identity(7)) == doctest::Approx(1.0));

  // Rank one u v^t with ||u|| = ||v|| = 2.
  CMat uv(3, 3);
  const double u[3] = {2.0, 0.0, 0.0};
  const double v[3] = {0.0, 1.2, 1.6};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) uv(i, j) = u[i] * v[j];
  CHECK(operator_norm(uv) == doctest::Approx(4.0).epsilon(1e-9));

  const CMat a = random_matrix(50, 505);
  const std::vector<double> sv = singular_values(a);
  CHECK(operator_norm(a) == doctest::Approx(sv.front()).epsilon(1e-8));
}

TEST_CASE("singular values match the Hermitization spectrum") {
  const int n = 24;
  const CMat a = random_matrix(n, 606);
  const std::vector<double> sv = singular_values(a);
  // Hermitization [[0, A], [A^*, 0]] has eigenvalues +-sigma_i.
  CMat y(2 * n, 2 * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      y(i, n + j) = a(i, j);
      y(n + i, j) = std::conj(a(j, i));
    }
  std::vector<double> pos;
  for (const cplx& v : eigenvalues(y).values)
    if (v.real() > 0.0) pos.push_back(v.real());
  std::sort(pos.begin(), pos.end(), std::greater<double>());
  REQUIRE(pos.size() == static_cast<std::size_t>(n));
  const double scale = sv.front();
  for (int i = 0; i < n; ++i) CHECK(std::abs(sv[i] - pos[i]) <= 1e-8 * (1.0 + scale));
}

TEST_CASE("smallest singular value exact cases") {
  CHECK(smallest_singular(CMat::identity(4), 0.0) == doctest::Approx(1.0));
  CMat zero(3, 3);
  CHECK(smallest_singular(zero, cplx(3.0, 4.0)) == doctest::Approx(5.0));

  // Repeated column: exactly singular.
  CMat s(3, 3);
  for (int i = 0; i < 3; ++i) {
    s(i, 0) = cplx(i + 1.0, -i);
    s(i, 1) = s(i, 0);
    s(i, 2) = cplx(0.3 * i, 1.0);
  }
  CHECK(smallest_singular(s, 0.0) <= 1e-10);
}

TEST_CASE("smallest singular value rejects above the cap") {
  CHECK_THROWS_AS(smallest_singular(CMat(513, 513), 0.0), std::invalid_argument);
}

TEST_CASE("balancing can be disabled without changing the spectrum") {
  const CMat a = random_matrix(12, 707);
  EigOptions no_balance;
  no_balance.balance = false;
  const double d = eig_multiset_distance(eigenvalues(a).values, eigenvalues(a, no_balance).values);
  CHECK(d <= 1e-8);
}

TEST_CASE("spectral report fields are consistent") {
  const CMat a = random_matrix(16, 808);
  const SpectralReport rep = spectral_report(a);
  CHECK(rep.converged);
  CHECK(rep.eigenvalues.size() == 16);
  CHECK(rep.rho <= rep.op_norm * (1.0 + 1e-8));
  double rho = 0.0;
  for (const cplx& v : rep.eigenvalues) rho = std::max(rho, std::abs(v));
  CHECK(rep.rho == doctest::Approx(rho));
}
