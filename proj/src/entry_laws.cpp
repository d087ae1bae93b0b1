#include "specrad/entry_laws.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace specrad {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double parse_number(std::string_view s, std::string_view what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(std::string(s), &pos);
    if (pos != s.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw std::invalid_argument("entry law: bad " + std::string(what) + " '" + std::string(s) + "'");
  }
}

// (m-1)!! for even m; odd central moments of the standard normal vanish.
double gaussian_abs_even_moment(int m) {
  double v = 1.0;
  for (int k = m - 1; k >= 2; k -= 2) v *= k;
  return v;
}

double factorial(int m) {
  double v = 1.0;
  for (int k = 2; k <= m; ++k) v *= k;
  return v;
}

}  // namespace

EntryLaw EntryLaw::pareto(double alpha) {
  if (!(alpha > 2.0 && alpha < 4.0))
    throw std::invalid_argument("pareto: alpha must lie in (2,4)");
  EntryLaw law;
  law.kind = LawKind::SymmetricPareto;
  law.alpha = alpha;
  return law;
}

EntryLaw EntryLaw::bernoulli(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("bernoulli: p must lie in (0,1)");
  EntryLaw law;
  law.kind = LawKind::CenteredBernoulli;
  law.p = p;
  return law;
}

bool EntryLaw::is_symmetric() const {
  switch (kind) {
    case LawKind::RealGaussian:
    case LawKind::ComplexGaussian:
    case LawKind::Rademacher:
    case LawKind::Laplace:
    case LawKind::SymmetricPareto:
      return true;
    case LawKind::CenteredBernoulli:
      return p == 0.5;
  }
  return false;
}

TailClass EntryLaw::tail_class() const {
  switch (kind) {
    case LawKind::RealGaussian:
    case LawKind::ComplexGaussian:
    case LawKind::Rademacher:
    case LawKind::CenteredBernoulli:
      return TailClass::Subgaussian;
    case LawKind::Laplace:
      return TailClass::Subexponential;
    case LawKind::SymmetricPareto:
      return TailClass::HeavyTwoPlusEps;
  }
  return TailClass::Subgaussian;
}

EntryLaw EntryLaw::parse(std::string_view spec) {
  if (spec == "real-gaussian") return real_gaussian();
  if (spec == "complex-gaussian") return complex_gaussian();
  if (spec == "rademacher") return rademacher();
  if (spec == "laplace") return laplace();
  if (spec.rfind("pareto:", 0) == 0) return pareto(parse_number(spec.substr(7), "alpha"));
  if (spec.rfind("bernoulli:", 0) == 0) return bernoulli(parse_number(spec.substr(10), "p"));
  throw std::invalid_argument("unknown entry law '" + std::string(spec) + "'");
}

std::string EntryLaw::spec_string() const {
  switch (kind) {
    case LawKind::RealGaussian: return "real-gaussian";
    case LawKind::ComplexGaussian: return "complex-gaussian";
    case LawKind::Rademacher: return "rademacher";
    case LawKind::Laplace: return "laplace";
    case LawKind::SymmetricPareto: return "pareto:" + std::to_string(alpha);
    case LawKind::CenteredBernoulli: return "bernoulli:" + std::to_string(p);
  }
  return "?";
}

double mixed_moment(const EntryLaw& law, int a, int b) {
  if (a < 0 || b < 0) throw std::invalid_argument("mixed_moment: negative order");
  const int m = a + b;
  if (m == 0) return 1.0;

  if (law.kind == LawKind::ComplexGaussian) {
    // Rotational invariance kills everything off the diagonal a == b;
    // on it, E|x|^(2a) = a! for the unit-variance complex Gaussian.
    if (a != b) return 0.0;
    return factorial(a);
  }

  // The remaining laws are real, so only the total power matters.
  switch (law.kind) {
    case LawKind::RealGaussian:
      return (m % 2 != 0) ? 0.0 : gaussian_abs_even_moment(m);
    case LawKind::Rademacher:
      return (m % 2 != 0) ? 0.0 : 1.0;
    case LawKind::Laplace:
      // E x^m = m! * b^m with b = 1/sqrt(2), even m.
      return (m % 2 != 0) ? 0.0 : factorial(m) * std::pow(0.5, m / 2.0);
    case LawKind::SymmetricPareto: {
      if (m % 2 != 0) return 0.0;
      if (m >= law.alpha) return kInf;
      const double xm2 = (law.alpha - 2.0) / law.alpha;  // x_min^2
      return law.alpha * std::pow(xm2, m / 2.0) / (law.alpha - m);
    }
    case LawKind::CenteredBernoulli: {
      const double p = law.p, q = 1.0 - p;
      const double sd = std::sqrt(p * q);
      return (q * std::pow(-p, m) + p * std::pow(q, m)) / std::pow(sd, m);
    }
    case LawKind::ComplexGaussian:
      break;  // handled above
  }
  throw std::logic_error("mixed_moment: unhandled law");
}

cplx draw(const EntryLaw& law, rng::CounterRng& rng) {
  switch (law.kind) {
    case LawKind::RealGaussian: {
      const double u1 = rng.next_unit(), u2 = rng.next_unit();
      return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }
    case LawKind::ComplexGaussian: {
      // (g1 + i g2)/sqrt(2) from one Box-Muller pair: exact unit absolute
      // second moment and E[x^2] = 0.
      const double u1 = rng.next_unit(), u2 = rng.next_unit();
      const double r = std::sqrt(-std::log(u1));  // sqrt(-2 ln u)/sqrt(2)
      const double th = 2.0 * std::numbers::pi * u2;
      return {r * std::cos(th), r * std::sin(th)};
    }
    case LawKind::Rademacher:
      return (rng.next_u64() >> 63) ? 1.0 : -1.0;
    case LawKind::Laplace: {
      const double w = rng.next_unit() - 0.5;
      const double mag = -std::log(1.0 - 2.0 * std::abs(w)) / std::sqrt(2.0);
      return w < 0.0 ? -mag : mag;
    }
    case LawKind::SymmetricPareto: {
      const double sign = (rng.next_u64() >> 63) ? 1.0 : -1.0;
      const double u = rng.next_unit();
      const double xm = std::sqrt((law.alpha - 2.0) / law.alpha);
      return sign * xm * std::pow(u, -1.0 / law.alpha);
    }
    case LawKind::CenteredBernoulli: {
      const double sd = std::sqrt(law.p * (1.0 - law.p));
      return (rng.next_unit() < law.p) ? (1.0 - law.p) / sd : -law.p / sd;
    }
  }
  throw std::logic_error("draw: unhandled law");
}

}  // namespace specrad
