#include "specrad/eig.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "specrad/cplx_ops.hpp"
#include "specrad/errors.hpp"

namespace specrad {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double cabs1(const cplx& z) { return std::abs(z.real()) + std::abs(z.imag()); }

// Parlett-Reinsch balancing, scaling phase only (no permutations); radix 2
// so the scaling is exact in floating point.
void balance_in_place(CMat& h) {
  const int n = h.rows();
  constexpr double radix = 2.0, b2 = radix * radix;
  bool again = true;
  while (again) {
    again = false;
    for (int i = 0; i < n; ++i) {
      double c = 0.0, r = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        c += cabs1(h(j, i));
        r += cabs1(h(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      const double s = c + r;
      double f = 1.0, g = r / radix;
      while (c < g) {
        f *= radix;
        c *= b2;
      }
      g = r * radix;
      while (c >= g) {
        f /= radix;
        c /= b2;
      }
      if ((c + r) / f < 0.95 * s) {
        again = true;
        const double ginv = 1.0 / f;
        for (int j = 0; j < n; ++j) h(i, j) *= ginv;
        for (int j = 0; j < n; ++j) h(j, i) *= f;
      }
    }
  }
}

// Householder reduction to upper Hessenberg, eigenvalues-only (transforms
// are not accumulated).
void hessenberg_in_place(CMat& h) {
  const int n = h.rows();
  std::vector<cplx> v(n);
  for (int k = 0; k + 2 < n; ++k) {
    double xnorm2 = 0.0;
    for (int i = k + 1; i < n; ++i) xnorm2 += std::norm(h(i, k));
    if (xnorm2 == 0.0) continue;
    const double xnorm = std::sqrt(xnorm2);
    const cplx x0 = h(k + 1, k);
    const double ax0 = std::abs(x0);
    const cplx phase = ax0 == 0.0 ? cplx(1.0) : x0 / ax0;
    const cplx beta = -phase * xnorm;
    // v = x - beta*e1; tau = 2/|v|^2 = 1/(xnorm^2 + xnorm*|x0|)
    v[k + 1] = x0 - beta;
    for (int i = k + 2; i < n; ++i) v[i] = h(i, k);
    const double tau = 1.0 / (xnorm2 + xnorm * ax0);

    // Left: rows k+1..n-1 of columns k+1..n-1 get (I - tau v v^*).
    for (int j = k + 1; j < n; ++j) {
      cplx dot = 0.0;
      for (int i = k + 1; i < n; ++i) dot += cmul_conj(h(i, j), v[i]);
      dot *= tau;
      for (int i = k + 1; i < n; ++i) h(i, j) -= cmul(dot, v[i]);
    }
    // Right: all rows, columns k+1..n-1.
    for (int i = 0; i < n; ++i) {
      cplx* hi = h.row(i);
      cplx dot = 0.0;
      for (int j = k + 1; j < n; ++j) dot += cmul(hi[j], v[j]);
      dot *= tau;
      for (int j = k + 1; j < n; ++j) hi[j] -= cmul_conj(dot, v[j]);
    }
    h(k + 1, k) = beta;
    for (int i = k + 2; i < n; ++i) h(i, k) = 0.0;
  }
}

struct Givens {
  double c;
  cplx s;
};

// G = [[c, s], [-conj(s), c]] with G*(x, y)^t = (r, 0)^t.
Givens make_givens(const cplx& x, const cplx& y) {
  const double ax = std::abs(x), ay = std::abs(y);
  if (ay == 0.0) return {1.0, 0.0};
  if (ax == 0.0) return {0.0, std::conj(y) / ay};
  const double d = std::hypot(ax, ay);
  return {ax / d, (x / ax) * std::conj(y) / d};
}

// Eigenvalues of a 2x2 block, stable against cancellation.
void eig2x2(const cplx& a, const cplx& b, const cplx& c, const cplx& d,
            cplx& l1, cplx& l2) {
  const cplx p = 0.5 * (a - d);
  cplx rt = std::sqrt(p * p + b * c);
  if (p.real() * rt.real() + p.imag() * rt.imag() < 0.0) rt = -rt;
  const cplx big = p + rt;
  if (big == cplx(0.0)) {
    l1 = d;
    l2 = a;
    return;
  }
  l1 = d - b * c / big;  // root closest to d
  l2 = a + b * c / big;  // the other one (sum of the pair is a + d)
}

// One implicit single-shift sweep on the active window [lo, hi].
//
// Column rotations for rows above the current panel are deferred and flushed
// row-major per panel: those rows are touched by nothing else inside the
// panel, so each element sees the identical operation sequence and the
// result is bitwise the same as the naive order, at streaming access cost.
void qr_sweep(CMat& h, int lo, int hi, const cplx& shift) {
  constexpr int kPanel = 48;
  Givens rots[kPanel];

  cplx x = h(lo, lo) - shift;
  cplx y = h(lo + 1, lo);
  for (int k0 = lo; k0 < hi; k0 += kPanel) {
    const int kmax = std::min(k0 + kPanel, hi);
    for (int k = k0; k < kmax; ++k) {
      const Givens g = make_givens(x, y);
      rots[k - k0] = g;
      const cplx sn = g.s, snc = std::conj(g.s);
      // Rows k, k+1 over columns max(k-1, lo)..hi.
      const int j0 = std::max(k - 1, lo);
      cplx* rk = h.row(k);
      cplx* rk1 = h.row(k + 1);
      for (int j = j0; j <= hi; ++j) {
        const cplx t1 = rk[j], t2 = rk1[j];
        rk[j] = g.c * t1 + cmul(sn, t2);
        rk1[j] = g.c * t2 - cmul(snc, t1);
      }
      // Columns k, k+1, hot rows k0..min(k+2, hi) only.
      const int i1 = std::min(k + 2, hi);
      for (int i = k0; i <= i1; ++i) {
        cplx* ri = h.row(i);
        const cplx t1 = ri[k], t2 = ri[k + 1];
        ri[k] = g.c * t1 + cmul(snc, t2);
        ri[k + 1] = g.c * t2 - cmul(sn, t1);
      }
      if (k < hi - 1) {
        x = h(k + 1, k);
        y = h(k + 2, k);
      }
    }
    // Deferred column rotations for rows lo..k0-1, applied in rotation order
    // along each row.
    for (int i = lo; i < k0; ++i) {
      cplx* ri = h.row(i);
      for (int k = k0; k < kmax; ++k) {
        const Givens& g = rots[k - k0];
        const cplx t1 = ri[k], t2 = ri[k + 1];
        ri[k] = g.c * t1 + cmul_conj(t2, g.s);
        ri[k + 1] = g.c * t2 - cmul(g.s, t1);
      }
    }
  }
}

double hessenberg_norm(const CMat& h) {
  double s = 0.0;
  for (int i = 0; i < h.rows(); ++i)
    for (int j = std::max(0, i - 1); j < h.cols(); ++j) s += std::norm(h(i, j));
  return std::sqrt(s);
}

}  // namespace

EigResult eigenvalues(const CMat& a, const EigOptions& opts) {
  if (a.rows() != a.cols()) throw std::invalid_argument("eigenvalues: matrix not square");
  const int n = a.rows();
  EigResult res;
  res.values.assign(n, 0.0);
  if (n == 0) return res;
  for (const cplx& v : a.data())
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw std::invalid_argument("eigenvalues: non-finite entry");

  CMat h = a;
  if (opts.balance) balance_in_place(h);
  hessenberg_in_place(h);
  const double hnorm = hessenberg_norm(h);
  if (hnorm == 0.0) return res;  // zero matrix

  const int budget = 40 * n;
  int hi = n - 1;
  int since_deflation = 0;
  while (hi >= 0) {
    // Deflation scan: find the top of the active block.
    int lo = hi;
    while (lo > 0) {
      double tst = std::abs(h(lo - 1, lo - 1)) + std::abs(h(lo, lo));
      if (tst == 0.0) tst = hnorm;
      if (std::abs(h(lo, lo - 1)) <= kEps * tst) {
        h(lo, lo - 1) = 0.0;
        break;
      }
      --lo;
    }
    if (lo == hi) {
      res.values[hi] = h(hi, hi);
      --hi;
      since_deflation = 0;
      continue;
    }
    if (lo == hi - 1) {
      cplx l1, l2;
      eig2x2(h(lo, lo), h(lo, hi), h(hi, lo), h(hi, hi), l1, l2);
      res.values[hi] = l1;
      res.values[lo] = l2;
      hi -= 2;
      since_deflation = 0;
      continue;
    }
    if (res.iterations >= budget) {
      // Budget exhausted: report the diagonal of the unreduced block.
      res.converged = false;
      for (int i = 0; i <= hi; ++i) res.values[i] = h(i, i);
      return res;
    }
    cplx shift;
    ++since_deflation;
    if (since_deflation % 10 == 0) {
      // Exceptional shift to break symmetry-induced stalls.
      shift = h(hi, hi) + 0.75 * std::abs(h(hi, hi - 1));
    } else {
      cplx l1, l2;
      eig2x2(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi), l1, l2);
      shift = l1;
    }
    qr_sweep(h, lo, hi, shift);
    ++res.iterations;
  }
  return res;
}

double spectral_radius(const CMat& a, const EigOptions& opts) {
  const EigResult r = eigenvalues(a, opts);
  if (!r.converged) throw NonConvergence("spectral_radius: QR sweep budget exhausted");
  double rho = 0.0;
  for (const cplx& v : r.values) rho = std::max(rho, std::abs(v));
  return rho;
}

double operator_norm(const CMat& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("operator_norm: matrix not square");
  const int n = a.rows();
  if (n == 0) return 0.0;

  std::vector<cplx> v(n, cplx(1.0 / std::sqrt(static_cast<double>(n))));
  double sigma_prev = -1.0;
  const int max_iters = 10 * n;
  for (int it = 0; it < max_iters; ++it) {
    std::vector<cplx> w = matvec(a, v);
    double w2 = 0.0;
    for (const cplx& x : w) w2 += std::norm(x);
    if (w2 == 0.0) return 0.0;
    std::vector<cplx> u = adjoint_matvec(a, w);
    double u2 = 0.0;
    for (const cplx& x : u) u2 += std::norm(x);
    // Rayleigh quotient of A A^* at w.
    const double sigma = std::sqrt(u2 / w2);
    if (sigma_prev >= 0.0 && std::abs(sigma - sigma_prev) <= 1e-10 * sigma) return sigma;
    sigma_prev = sigma;
    if (u2 == 0.0) return std::sqrt(w2);  // ||Av|| with ||v|| = 1
    const double inv = 1.0 / std::sqrt(u2);
    for (int i = 0; i < n; ++i) v[i] = u[i] * inv;
  }
  // Fallback: exact Hermitian eigensolve of A A^*.
  const EigResult r = eigenvalues(matmul(a, a.adjoint()));
  double lmax = 0.0;
  for (const cplx& x : r.values) lmax = std::max(lmax, x.real());
  return std::sqrt(std::max(lmax, 0.0));
}

namespace {

// Householder bidiagonalization; the complex bidiagonal is diagonally
// unitarily equivalent to the real one with the entry moduli, so only the
// moduli are kept.
void bidiagonalize(CMat w, std::vector<double>& d, std::vector<double>& e) {
  const int n = w.rows();
  d.assign(n, 0.0);
  e.assign(std::max(n - 1, 0), 0.0);
  std::vector<cplx> v(n);
  for (int k = 0; k < n; ++k) {
    // Left reflector on column k, rows k..n-1.
    double xnorm2 = 0.0;
    for (int i = k; i < n; ++i) xnorm2 += std::norm(w(i, k));
    if (xnorm2 > 0.0) {
      const double xnorm = std::sqrt(xnorm2);
      const cplx x0 = w(k, k);
      const double ax0 = std::abs(x0);
      const cplx phase = ax0 == 0.0 ? cplx(1.0) : x0 / ax0;
      v[k] = x0 + phase * xnorm;
      for (int i = k + 1; i < n; ++i) v[i] = w(i, k);
      const double tau = 1.0 / (xnorm2 + xnorm * ax0);
      for (int j = k + 1; j < n; ++j) {
        cplx dot = 0.0;
        for (int i = k; i < n; ++i) dot += cmul_conj(w(i, j), v[i]);
        dot *= tau;
        for (int i = k; i < n; ++i) w(i, j) -= cmul(dot, v[i]);
      }
      d[k] = xnorm;  // |beta| with beta = -phase*xnorm
    }
    if (k + 1 >= n) break;
    // Right reflector on row k, columns k+1..n-1.
    double rnorm2 = 0.0;
    for (int j = k + 1; j < n; ++j) rnorm2 += std::norm(w(k, j));
    if (rnorm2 > 0.0) {
      const double rnorm = std::sqrt(rnorm2);
      const cplx r0 = std::conj(w(k, k + 1));
      const double ar0 = std::abs(r0);
      const cplx phase = ar0 == 0.0 ? cplx(1.0) : r0 / ar0;
      v[k + 1] = r0 + phase * rnorm;
      for (int j = k + 2; j < n; ++j) v[j] = std::conj(w(k, j));
      const double tau = 1.0 / (rnorm2 + rnorm * ar0);
      for (int i = k + 1; i < n; ++i) {
        cplx* wi = w.row(i);
        cplx dot = 0.0;
        for (int j = k + 1; j < n; ++j) dot += cmul(wi[j], v[j]);
        dot *= tau;
        for (int j = k + 1; j < n; ++j) wi[j] -= cmul_conj(dot, v[j]);
      }
      e[k] = rnorm;
    }
  }
}

// Implicit-shift QL for a symmetric tridiagonal matrix, eigenvalues only
// (EISPACK tql1 lineage).
std::vector<double> tridiag_eigenvalues(std::vector<double> d, std::vector<double> e) {
  const int n = static_cast<int>(d.size());
  if (n == 0) return {};
  e.resize(n, 0.0);
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= kEps * dd) break;
      }
      if (m != l) {
        if (iter++ == 64)
          throw NonConvergence("tridiagonal QL: too many iterations");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        int i;
        for (i = m - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
  return d;
}

}  // namespace

std::vector<double> singular_values(const CMat& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("singular_values: matrix not square");
  const int n = a.rows();
  if (n == 0) return {};
  std::vector<double> d, e;
  bidiagonalize(a, d, e);
  // Golub-Kahan embedding: zero-diagonal tridiagonal with off-diagonals
  // d0, e0, d1, e1, ..., d_{n-1}; its spectrum is {+sigma_i, -sigma_i}.
  std::vector<double> diag(2 * n, 0.0), off;
  off.reserve(2 * n - 1);
  for (int k = 0; k < n; ++k) {
    off.push_back(d[k]);
    if (k + 1 < n) off.push_back(e[k]);
  }
  std::vector<double> ev = tridiag_eigenvalues(std::move(diag), std::move(off));
  std::sort(ev.begin(), ev.end(), std::greater<double>());
  ev.resize(n);
  for (double& s : ev) s = std::max(s, 0.0);
  return ev;
}

double smallest_singular(const CMat& a, cplx z) {
  if (a.rows() != a.cols()) throw std::invalid_argument("smallest_singular: matrix not square");
  if (a.rows() > kSmallestSingularCap)
    throw std::invalid_argument("smallest_singular: dimension exceeds configured cap");
  CMat b = a;
  for (int i = 0; i < b.rows(); ++i) b(i, i) -= z;
  const std::vector<double> sv = singular_values(b);
  return sv.empty() ? 0.0 : sv.back();
}

SpectralReport spectral_report(const CMat& a, const EigOptions& opts) {
  SpectralReport rep;
  const EigResult r = eigenvalues(a, opts);
  rep.eigenvalues = r.values;
  rep.iterations = r.iterations;
  rep.converged = r.converged;
  for (const cplx& v : r.values) rep.rho = std::max(rep.rho, std::abs(v));
  rep.op_norm = operator_norm(a);
  return rep;
}

}  // namespace specrad
