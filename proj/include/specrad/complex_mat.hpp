#pragma once

#include <cassert>
#include <complex>
#include <vector>

namespace specrad {

using cplx = std::complex<double>;

// Dense row-major complex matrix.  This is the only matrix type in the
// project; everything is desk scale, so no sparse storage.
class CMat {
 public:
  CMat() = default;
  CMat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols) {}

  static CMat identity(int n) {
    CMat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  cplx& operator()(int i, int j) {
    assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
    return a_[static_cast<std::size_t>(i) * cols_ + j];
  }
  const cplx& operator()(int i, int j) const {
    assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
    return a_[static_cast<std::size_t>(i) * cols_ + j];
  }

  cplx* row(int i) { return a_.data() + static_cast<std::size_t>(i) * cols_; }
  const cplx* row(int i) const { return a_.data() + static_cast<std::size_t>(i) * cols_; }

  const std::vector<cplx>& data() const { return a_; }
  std::vector<cplx>& data() { return a_; }

  CMat adjoint() const {
    CMat m(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
  }

  double frobenius_norm_sq() const {
    double s = 0.0;
    for (const cplx& v : a_) s += std::norm(v);
    return s;
  }

  bool operator==(const CMat& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<cplx> a_;
};

// C = A * B, cache-friendly ikj order.
CMat matmul(const CMat& a, const CMat& b);

// y = A * x and y = A^* x without forming the adjoint.
std::vector<cplx> matvec(const CMat& a, const std::vector<cplx>& x);
std::vector<cplx> adjoint_matvec(const CMat& a, const std::vector<cplx>& x);

// A^p by repeated multiplication (p >= 1).
CMat mat_power(const CMat& a, int p);

}  // namespace specrad
