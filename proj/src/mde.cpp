#include "specrad/mde.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "specrad/eig.hpp"
#include "specrad/errors.hpp"

namespace specrad {

namespace {

struct Cubic {
  // a^3 + c2 a^2 + c1 a + c0
  cplx c2, c1, c0;
  cplx eval(cplx a) const { return ((a + c2) * a + c1) * a + c0; }
  cplx deriv(cplx a) const { return (3.0 * a + 2.0 * c2) * a + c1; }
};

Cubic mde_cubic(cplx z, cplx v) {
  const double tau = std::norm(z);
  return {2.0 * v, 1.0 + v * v - tau, v};
}

std::array<cplx, 3> cubic_roots(const Cubic& c) {
  CMat comp(3, 3);
  comp(0, 2) = -c.c0;
  comp(1, 0) = 1.0;
  comp(1, 2) = -c.c1;
  comp(2, 1) = 1.0;
  comp(2, 2) = -c.c2;
  const EigResult r = eigenvalues(comp);
  std::array<cplx, 3> roots{r.values[0], r.values[1], r.values[2]};
  // Two Newton polish steps; keep a step only when the residual improves.
  for (cplx& a : roots) {
    for (int it = 0; it < 2; ++it) {
      const cplx f = c.eval(a);
      const cplx df = c.deriv(a);
      if (df == cplx(0.0)) break;
      const cplx an = a - f / df;
      if (std::abs(c.eval(an)) < std::abs(f)) a = an; else break;
    }
  }
  // Deterministic order: by real part, then imaginary.
  std::sort(roots.begin(), roots.end(), [](const cplx& x, const cplx& y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  return roots;
}

MDESolution make_solution(cplx z, cplx v, cplx a, const Cubic& c, std::string branch) {
  MDESolution s;
  s.z = z;
  s.v = v;
  s.a = a;
  const cplx den = a + v;
  s.b = den == cplx(0.0) ? cplx(0.0) : -a * z / den;
  s.residual = std::abs(c.eval(a));
  s.branch = std::move(branch);
  return s;
}

}  // namespace

std::array<MDESolution, 3> solve_cubic(cplx z, cplx v) {
  if (z == cplx(0.0) && v == cplx(0.0))
    throw std::invalid_argument("mde cubic: z = v = 0 is degenerate");
  const Cubic c = mde_cubic(z, v);
  const std::array<cplx, 3> roots = cubic_roots(c);
  std::array<MDESolution, 3> out{
      make_solution(z, v, roots[0], c, "root0"),
      make_solution(z, v, roots[1], c, "root1"),
      make_solution(z, v, roots[2], c, "root2"),
  };
  return out;
}

MDESolution herglotz_root(cplx z, cplx v) {
  if (!(v.imag() > 0.0))
    throw std::invalid_argument("herglotz root: need Im v > 0");

  // Start high above the real axis, where exactly one root lies in the
  // upper half plane (the branch behaves like -1/v there), and follow it
  // down to v by nearest-root continuation.
  double h = 1.0;
  cplx prev;
  bool have_prev = false;
  while (true) {
    const cplx vj = v + cplx(0.0, h);
    const Cubic c = mde_cubic(z, vj);
    const std::array<cplx, 3> roots = cubic_roots(c);
    if (!have_prev) {
      const cplx* best = nullptr;
      for (const cplx& r : roots)
        if (r.imag() > 0.0 && (best == nullptr || r.imag() > best->imag())) best = &r;
      if (best == nullptr)
        throw BranchAmbiguity("herglotz root: no upper-half-plane root at tracking start");
      prev = *best;
      have_prev = true;
    } else {
      int k = 0;
      double dmin = std::abs(roots[0] - prev);
      for (int t = 1; t < 3; ++t) {
        const double d = std::abs(roots[static_cast<std::size_t>(t)] - prev);
        if (d < dmin) {
          dmin = d;
          k = t;
        }
      }
      prev = roots[static_cast<std::size_t>(k)];
    }
    if (h == 0.0) {
      double dbest = 1e300, dsecond = 1e300;
      cplx abest;
      int positive = 0;
      for (const cplx& r : roots) {
        if (r.imag() > 1e-12 * (1.0 + std::abs(r))) ++positive;
        const double d = std::abs(r - prev);
        if (d < dbest) {
          dsecond = dbest;
          dbest = d;
          abest = r;
        } else if (d < dsecond) {
          dsecond = d;
        }
      }
      if (positive > 1 && dsecond < 2.0 * dbest + 1e-14)
        throw BranchAmbiguity("herglotz root: two upper-half-plane roots after tracking");
      return make_solution(z, v, abest, c, "herglotz");
    }
    h = h < 1e-8 ? 0.0 : h * 0.5;
  }
}

bool support_indicator(cplx z, double v) {
  if (!(std::abs(v) < kSupportWindow))
    throw std::invalid_argument("support indicator: |v| >= 1/3 is outside the analyzed window");
  const double tau = std::norm(z);
  if (tau == 0.0 && v == 0.0)
    throw std::invalid_argument("mde cubic: z = v = 0 is degenerate");
  const Cubic c = mde_cubic(z, cplx(v, 0.0));
  const std::array<cplx, 3> roots = cubic_roots(c);
  double scale = 1.0;
  for (const cplx& r : roots) {
    if (std::abs(r.imag()) > kRealRootImagTol) return false;
    scale = std::max(scale, std::abs(r));
  }
  // A root collision (spectral edge, e.g. the triple root at tau = 1, v = 0)
  // leaves real-vs-complex numerically undecidable; report not-excluded.
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (std::abs(roots[static_cast<std::size_t>(i)] - roots[static_cast<std::size_t>(j)]) <=
          1e-6 * scale)
        return false;
  return true;
}

double sigma_min_lower(cplx z) {
  const double tau = std::norm(z);
  if (!(tau > 1.0)) throw std::invalid_argument("sigma_min_lower: need |z| > 1");
  return std::min(1.0 / 3.0, std::pow((tau - 1.0) / 10.0, 1.5));
}

}  // namespace specrad
