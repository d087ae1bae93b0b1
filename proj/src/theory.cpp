#include "specrad/theory.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "specrad/errors.hpp"
#include "specrad/special_functions.hpp"

namespace specrad {

double expectation_bound_thm11(double sigma, double sigma_star, double n, double eps, double big_c) {
  if (!(eps > 0.0)) throw std::invalid_argument("thm11 bound: eps must be > 0");
  if (!(n >= 2.0)) throw std::invalid_argument("thm11 bound: n must be >= 2");
  if (!(sigma_star > 0.0)) throw std::invalid_argument("thm11 bound: sigma_star must be > 0");
  if (!(sigma / sigma_star <= n)) throw std::invalid_argument("thm11 bound: need sigma/sigma_star <= n");
  const double lg = std::log1p(eps);
  const double big_l = 6.0 * std::log(n) / lg;
  const double main = sigma + 6.0 * sigma_star * std::sqrt(std::log(n)) / std::sqrt(lg);
  const double ratio = sigma / sigma_star;
  const double corr = 1.0 + big_c * std::sqrt(big_l) / std::sqrt(ratio * ratio + big_l);
  return (1.0 + eps) * main * corr;
}

namespace {
void require_positive_t(double t) {
  if (!(t > 0.0)) throw std::invalid_argument("tail curve: t must be > 0");
}
}  // namespace

double tail_thm14(double t, double n, double c0, double c) {
  require_positive_t(t);
  return c0 * n * std::exp(-c * t);
}

double tail_thm15(double t, double n, double c0, double c1) {
  require_positive_t(t);
  return c0 * n * n * std::exp(-c1 * t);
}

double tail_thm16(double t, double sigma_star, double c0) {
  require_positive_t(t);
  const double m = std::min(t * t, t * t * t);
  return (1.0 + 1.0 / (t * t * t)) * std::exp(-c0 * m / (sigma_star * sigma_star));
}

double tail_thm18(double t, double q) {
  require_positive_t(t);
  return q * std::exp(-2.0 * t);
}

GumbelRecentring gumbel_recentring(double n) {
  if (!(n > 1.0)) throw std::invalid_argument("gumbel recentring: n must exceed 1");
  const double ln = std::log(n);
  const double gamma_n = ln - 2.0 * std::log(ln) - std::log(2.0 * std::numbers::pi);
  if (!(gamma_n > 0.0))
    throw GammaNonpositive("gumbel recentring: gamma_n <= 0 at this dimension");
  GumbelRecentring g;
  g.gamma_n = gamma_n;
  g.location = 1.0 + std::sqrt(gamma_n / (4.0 * n));
  g.scale = 1.0 / std::sqrt(4.0 * n * gamma_n);
  return g;
}

double ginibre_radius_cdf(int n, double a) {
  if (n < 1) throw std::invalid_argument("ginibre cdf: n must be >= 1");
  if (!(a > 0.0)) return 0.0;
  const double x = n * a * a;
  // Kahan-compensated sum of log factors.
  double sum = 0.0, comp = 0.0;
  for (int m = 1; m <= n; ++m) {
    const double term = log_gamma_p(static_cast<double>(m), x);
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return std::exp(sum);
}

double cramer_rate(double x) {
  if (!(x > 0.0)) throw std::invalid_argument("cramer rate: x must be > 0");
  return x - 1.0 - std::log(x);
}

double norm_bound_eq15(double sigma, double sigma_star, double n, double eps) {
  if (!(eps > 0.0 && eps < 0.5)) throw std::invalid_argument("eq15 bound: eps must lie in (0, 1/2)");
  if (!(n >= 2.0)) throw std::invalid_argument("eq15 bound: n must be >= 2");
  return 2.0 * (1.0 + eps) * sigma +
         5.0 * (1.0 + eps) / std::sqrt(std::log1p(eps)) * sigma_star * std::sqrt(std::log(n));
}

BoundCurve make_curve(const std::string& name, const std::map<std::string, double>& params) {
  auto get = [&params](const std::string& key, double def) {
    const auto it = params.find(key);
    return it == params.end() ? def : it->second;
  };
  BoundCurve curve;
  curve.name = name;
  curve.params = params;
  if (name == "thm11") {
    const double s = get("sigma", 1.0), ss = get("sigma_star", 1.0), n = get("n", 2.0),
                 c = get("C", 1.0);
    curve.evaluate = [=](double eps) { return expectation_bound_thm11(s, ss, n, eps, c); };
  } else if (name == "thm14") {
    const double n = get("n", 1.0), c0 = get("C0", 1.0), c = get("C", 1.0);
    curve.evaluate = [=](double t) { return tail_thm14(t, n, c0, c); };
  } else if (name == "thm15") {
    const double n = get("n", 1.0), c0 = get("C0", 1.0), c1 = get("C1", 1.0);
    curve.evaluate = [=](double t) { return tail_thm15(t, n, c0, c1); };
  } else if (name == "thm16") {
    const double ss = get("sigma_star", 1.0), c0 = get("C0", 1.0);
    curve.evaluate = [=](double t) { return tail_thm16(t, ss, c0); };
  } else if (name == "thm18") {
    const double q = get("q", 1.0);
    curve.evaluate = [=](double t) { return tail_thm18(t, q); };
  } else if (name == "eq15") {
    const double s = get("sigma", 1.0), ss = get("sigma_star", 1.0), n = get("n", 2.0);
    curve.evaluate = [=](double eps) { return norm_bound_eq15(s, ss, n, eps); };
  } else if (name == "ginibre-cdf") {
    const int n = static_cast<int>(get("n", 1.0));
    curve.evaluate = [=](double a) { return ginibre_radius_cdf(n, a); };
  } else if (name == "cramer") {
    curve.evaluate = [](double x) { return cramer_rate(x); };
  } else {
    throw std::invalid_argument("unknown curve '" + name + "'");
  }
  return curve;
}

}  // namespace specrad
