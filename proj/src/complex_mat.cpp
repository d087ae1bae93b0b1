#include "specrad/complex_mat.hpp"

#include <stdexcept>

#include "specrad/cplx_ops.hpp"

namespace specrad {

CMat matmul(const CMat& a, const CMat& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matmul: shape mismatch");
  CMat c(a.rows(), b.cols());
  const int m = a.rows(), k = a.cols(), n = b.cols();
  for (int i = 0; i < m; ++i) {
    cplx* ci = c.row(i);
    for (int l = 0; l < k; ++l) {
      const cplx ail = a(i, l);
      if (ail == cplx(0.0)) continue;
      const cplx* bl = b.row(l);
      for (int j = 0; j < n; ++j) ci[j] += cmul(ail, bl[j]);
    }
  }
  return c;
}

std::vector<cplx> matvec(const CMat& a, const std::vector<cplx>& x) {
  if (static_cast<int>(x.size()) != a.cols()) throw std::invalid_argument("matvec: shape mismatch");
  std::vector<cplx> y(a.rows());
  for (int i = 0; i < a.rows(); ++i) {
    const cplx* ai = a.row(i);
    cplx s = 0.0;
    for (int j = 0; j < a.cols(); ++j) s += cmul(ai[j], x[j]);
    y[i] = s;
  }
  return y;
}

std::vector<cplx> adjoint_matvec(const CMat& a, const std::vector<cplx>& x) {
  if (static_cast<int>(x.size()) != a.rows()) throw std::invalid_argument("adjoint_matvec: shape mismatch");
  std::vector<cplx> y(a.cols());
  for (int i = 0; i < a.rows(); ++i) {
    const cplx* ai = a.row(i);
    const cplx xi = std::conj(x[i]);
    for (int j = 0; j < a.cols(); ++j) y[j] += std::conj(cmul(ai[j], xi));
  }
  return y;
}

CMat mat_power(const CMat& a, int p) {
  if (a.rows() != a.cols()) throw std::invalid_argument("mat_power: matrix not square");
  if (p < 1) throw std::invalid_argument("mat_power: p must be >= 1");
  CMat r = a;
  for (int k = 1; k < p; ++k) r = matmul(r, a);
  return r;
}

}  // namespace specrad
