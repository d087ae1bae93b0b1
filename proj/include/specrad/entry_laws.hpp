#pragma once

#include <string>
#include <string_view>

#include "specrad/complex_mat.hpp"
#include "specrad/rng.hpp"

namespace specrad {

// Standardized entry distributions: mean zero, unit second absolute moment.
// Each law carries an exact mixed-moment table so the brute-force trace
// oracle never needs sampling.
enum class LawKind {
  RealGaussian,
  ComplexGaussian,
  Rademacher,
  Laplace,          // scale 1/sqrt(2), unit variance
  SymmetricPareto,  // alpha in (2,4); E|x|^m infinite for m >= alpha
  CenteredBernoulli // (Ber(p) - p)/sqrt(p(1-p))
};

enum class TailClass { Subgaussian, Subexponential, HeavyTwoPlusEps };

struct EntryLaw {
  LawKind kind = LawKind::ComplexGaussian;
  double alpha = 0.0;  // SymmetricPareto only
  double p = 0.0;      // CenteredBernoulli only

  bool is_complex() const { return kind == LawKind::ComplexGaussian; }
  bool is_symmetric() const;
  TailClass tail_class() const;

  // Grammar: "real-gaussian", "complex-gaussian", "rademacher", "laplace",
  // "pareto:2.5", "bernoulli:0.05".
  static EntryLaw parse(std::string_view spec);
  std::string spec_string() const;

  static EntryLaw real_gaussian() { return {LawKind::RealGaussian}; }
  static EntryLaw complex_gaussian() { return {LawKind::ComplexGaussian}; }
  static EntryLaw rademacher() { return {LawKind::Rademacher}; }
  static EntryLaw laplace() { return {LawKind::Laplace}; }
  static EntryLaw pareto(double alpha);
  static EntryLaw bernoulli(double p);
};

// E[x^a * conj(x)^b], exactly.  Divergent moments (SymmetricPareto with
// a+b >= alpha) come back as +infinity; divergence is a value, not an error.
double mixed_moment(const EntryLaw& law, int a, int b);

// One variate.  Real-valued laws return a zero imaginary part.  The stream
// is owned by the caller; a law consumes a law-dependent but fixed number of
// uniforms per draw.
cplx draw(const EntryLaw& law, rng::CounterRng& rng);

}  // namespace specrad
