#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "specrad/eig.hpp"
#include "specrad/errors.hpp"
#include "specrad/mde.hpp"
#include "specrad/profiles.hpp"
#include "specrad/rng.hpp"
#include "specrad/sampler.hpp"

using namespace specrad;

namespace {

bool contains_root(const std::array<MDESolution, 3>& sols, cplx target, double tol) {
  for (const MDESolution& s : sols)
    if (std::abs(s.a - target) <= tol) return true;
  return false;
}

}  // namespace

TEST_CASE("v = 0 reduction has roots 0 and +-sqrt(tau - 1)") {
  const auto sols = solve_cubic(cplx(1.2, 0.0), cplx(0.0, 0.0));
  const double r = std::sqrt(0.44);
  CHECK(contains_root(sols, cplx(r, 0.0), 1e-9));
  CHECK(contains_root(sols, cplx(-r, 0.0), 1e-9));
  CHECK(contains_root(sols, cplx(0.0, 0.0), 1e-9));
  CHECK(r == doctest::Approx(0.6633249580710799).epsilon(1e-12));
}

TEST_CASE("residuals meet the scaled tolerance on random inputs") {
  rng::CounterRng gen(2024);
  for (int k = 0; k < 1000; ++k) {
    const cplx z(3.0 * (2.0 * gen.next_unit() - 1.0), 3.0 * (2.0 * gen.next_unit() - 1.0));
    const cplx v(2.0 * (2.0 * gen.next_unit() - 1.0), 2.0 * (2.0 * gen.next_unit() - 1.0));
    for (const MDESolution& s : solve_cubic(z, v)) {
      CHECK(s.residual <= 1e-12 * (1.0 + std::pow(std::abs(s.a), 3.0)));
      // b is tied to a by b = -a z / (a + v).
      if (s.a + v != cplx(0.0)) CHECK(std::abs(s.b - (-s.a * z / (s.a + v))) == 0.0);
    }
  }
}

TEST_CASE("degenerate origin is rejected") {
  CHECK_THROWS_AS(solve_cubic(cplx(0.0), cplx(0.0)), std::invalid_argument);
  CHECK_NOTHROW(solve_cubic(cplx(0.0), cplx(0.0, 1.0)));
  CHECK_NOTHROW(solve_cubic(cplx(1.0), cplx(0.0)));
}

TEST_CASE("herglotz root is the unique upper-half-plane branch") {
  const cplx z(2.0, 0.0);
  const cplx v(0.1, 0.01);
  const MDESolution s = herglotz_root(z, v);
  CHECK(s.a.imag() > 1e-10);
  int positive = 0;
  for (const MDESolution& cand : solve_cubic(z, v))
    if (cand.a.imag() > 1e-10) ++positive;
  CHECK(positive == 1);
  CHECK(s.branch == "herglotz");
  CHECK_THROWS_AS(herglotz_root(z, cplx(0.1, -0.1)), std::invalid_argument);
}

TEST_CASE("z = 0, v = i has a Herglotz branch") {
  const MDESolution s = herglotz_root(cplx(0.0), cplx(0.0, 1.0));
  CHECK(s.a.imag() > 1e-10);
  CHECK(s.residual <= 1e-12 * (1.0 + std::pow(std::abs(s.a), 3.0)));
}

TEST_CASE("Im a vanishes as Im v goes to zero outside the spectrum") {
  const cplx z(1.5, 0.0);
  double prev = 1e300;
  for (double eta : {1e-1, 1e-3, 1e-5, 1e-7}) {
    const MDESolution s = herglotz_root(z, cplx(0.05, eta));
    CHECK(s.a.imag() >= 0.0);
    CHECK(s.a.imag() <= prev);
    prev = s.a.imag();
  }
  CHECK(prev <= 1e-5);
}

TEST_CASE("the cubic depends on z only through |z|") {
  const cplx v(0.07, 0.2);
  const auto s1 = solve_cubic(cplx(1.3, 0.0), v);
  const auto s2 = solve_cubic(1.3 * cplx(std::cos(1.1), std::sin(1.1)), v);
  for (int i = 0; i < 3; ++i) {
    double best = 1e300;
    for (int j = 0; j < 3; ++j) best = std::min(best, std::abs(s1[i].a - s2[j].a));
    CHECK(best <= 1e-12);
  }
}

TEST_CASE("support indicator inside the analyzed window") {
  CHECK(support_indicator(cplx(std::sqrt(1.5), 0.0), 0.0));
  CHECK_FALSE(support_indicator(cplx(1.0, 0.0), 0.0));
  CHECK_THROWS_AS(support_indicator(cplx(1.5, 0.0), 0.4), std::invalid_argument);
}

TEST_CASE("sufficient condition implies three real roots (spot grid)") {
  for (int i = 0; i < 20; ++i) {
    const double tau = 1.05 + (4.0 - 1.05) * i / 19.0;
    for (int j = 0; j < 20; ++j) {
      const double v = -0.3 + 0.6 * j / 19.0;
      if (tau - 1.0 - v * v > 9.0 * std::pow(std::abs(v), 2.0 / 3.0)) {
        CAPTURE(tau);
        CAPTURE(v);
        CHECK(support_indicator(cplx(std::sqrt(tau), 0.0), v));
      }
    }
  }
}

TEST_CASE("excluded v keeps the sampled Hermitization spectrum away from it") {
  // support_indicator(z, v) = true predicts that the spectrum of the
  // Hermitization of A - z (eigenvalues +-sigma_i(A - z)) stays away from v
  // for doubly stochastic Gaussian samples; checked at two dimensions.
  const cplx z(1.5, 0.0);
  const double v = 0.05;
  REQUIRE(support_indicator(z, v));
  for (int n : {48, 96}) {
    for (int trial = 0; trial < 8; ++trial) {
      const MatrixSample ms = sample(make_homogeneous(n), EntryLaw::complex_gaussian(),
                                     {31, "mde-gap", static_cast<std::uint64_t>(trial)});
      CMat az = ms.a;
      for (int i = 0; i < n; ++i) az(i, i) -= z;
      double gap = 1e300;
      for (double s : singular_values(az)) gap = std::min(gap, std::abs(s - v));
      CHECK(gap >= 0.02);
    }
  }
}

TEST_CASE("sigma_min lower bound formula") {
  CHECK(sigma_min_lower(cplx(std::sqrt(1.25), 0.0)) ==
        doctest::Approx(0.0039528470752104743).epsilon(1e-12));
  CHECK(sigma_min_lower(cplx(1.5, 0.0)) == doctest::Approx(0.044194173824159223).epsilon(1e-12));
  CHECK(sigma_min_lower(cplx(std::sqrt(11.0), 0.0)) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK_THROWS_AS(sigma_min_lower(cplx(1.0, 0.0)), std::invalid_argument);
  CHECK_THROWS_AS(sigma_min_lower(cplx(0.5, 0.0)), std::invalid_argument);
}
