#pragma once

#include <array>
#include <string>

#include "specrad/complex_mat.hpp"

namespace specrad {

// Scalar reduction of the matrix Dyson equation for doubly stochastic
// Gaussian profiles.  With tau = |z|^2, the diagonal resolvent entry a of
// the Hermitization's free model solves
//
//     a^3 + 2 v a^2 + (1 + v^2 - tau) a + v = 0,
//
// and the off-diagonal entry is b = -a z / (a + v).  Predictions are exact
// only for the doubly stochastic zero-diagonal-variance case; the module
// does not police profiles.
struct MDESolution {
  cplx z;
  cplx v;
  cplx a;
  cplx b;
  double residual = 0.0;   // |cubic(a)|, to compare against 1e-12*(1+|a|^3)
  std::string branch;      // root-selection tag
};

// All three roots of the cubic, via the companion-matrix eigensolve of the
// eig module (uniform accuracy near root collisions), each residual filled.
// Throws std::invalid_argument when z = 0 and v = 0 simultaneously.
std::array<MDESolution, 3> solve_cubic(cplx z, cplx v);

// The unique root with Im a > 0 for Im v > 0, located by continuity
// tracking along a vertical path from v + i down to v.  Throws
// BranchAmbiguity when two roots remain candidates after tracking.
MDESolution herglotz_root(cplx z, cplx v);

inline constexpr double kSupportWindow = 1.0 / 3.0;  // analyzed |v| range
inline constexpr double kRealRootImagTol = 1e-9;

// True iff all three roots are real within the imaginary-part tolerance and
// numerically separable, i.e. v is certified excluded from the spectrum of
// the free Hermitization.  Root collisions (the spectral edge) report false.
// Only the window |v| < 1/3 is analyzed; outside it the answer is not
// claimed and a std::invalid_argument is raised.
bool support_indicator(cplx z, double v);

// Lower bound min(1/3, ((|z|^2 - 1)/10)^{3/2}) on the smallest singular
// value of the free Hermitization, valid for |z| > 1; rejects |z| <= 1.
double sigma_min_lower(cplx z);

}  // namespace specrad
