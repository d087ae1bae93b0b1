#pragma once

#include "specrad/complex_mat.hpp"

// Inline complex primitives for the dense kernels.  libstdc++ routes
// complex*complex through __muldc3 (an outlined call with non-finite
// recovery); the hot loops here only ever see finite desk-scale values, so
// the plain formulas are used directly.

namespace specrad {

inline cplx cmul(const cplx& a, const cplx& b) {
  return {a.real() * b.real() - a.imag() * b.imag(),
          a.real() * b.imag() + a.imag() * b.real()};
}

// a * conj(b)
inline cplx cmul_conj(const cplx& a, const cplx& b) {
  return {a.real() * b.real() + a.imag() * b.imag(),
          a.imag() * b.real() - a.real() * b.imag()};
}

}  // namespace specrad
