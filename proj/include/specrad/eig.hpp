#pragma once

#include <vector>

#include "specrad/complex_mat.hpp"

namespace specrad {

struct EigOptions {
  // Parlett-Reinsch diagonal scaling before reduction.  On by default; the
  // off switch exists for reproducibility studies on badly scaled profiles.
  bool balance = true;
};

struct EigResult {
  std::vector<cplx> values;  // n eigenvalues with multiplicity
  int iterations = 0;        // QR sweeps consumed
  bool converged = true;     // false once the 40n sweep budget runs out
};

struct SpectralReport {
  std::vector<cplx> eigenvalues;
  double rho = 0.0;      // max modulus
  double op_norm = 0.0;  // largest singular value
  int iterations = 0;
  bool converged = true;
};

// All eigenvalues of a square complex matrix: optional balancing, Householder
// reduction to upper Hessenberg, implicit single-shift (Wilkinson) QR with
// neighbor-magnitude deflation.  Real input should be promoted to complex by
// the caller; there is deliberately a single code path.
// Never throws on budget exhaustion; inspect `converged`.
EigResult eigenvalues(const CMat& a, const EigOptions& opts = {});

// Max eigenvalue modulus.  Ties resolve to the first eigenvalue in
// deflation order, which is deterministic.  Throws NonConvergence if the
// QR budget ran out.
double spectral_radius(const CMat& a, const EigOptions& opts = {});

// Largest singular value: power iteration on A*A^* with relative tolerance
// 1e-10 and a Rayleigh-quotient convergence test, at most 10n iterations,
// exact Hermitian eigensolve of A*A^* as fallback.
double operator_norm(const CMat& a);

// All singular values, descending, via Householder bidiagonalization and an
// implicit QL pass on the Golub-Kahan tridiagonal embedding.
std::vector<double> singular_values(const CMat& a);

inline constexpr int kSmallestSingularCap = 512;

// Smallest singular value of A - zI.  Rejects n above the desk-scale cap.
double smallest_singular(const CMat& a, cplx z);

// Eigenvalues plus both norms in one record.
SpectralReport spectral_report(const CMat& a, const EigOptions& opts = {});

}  // namespace specrad
