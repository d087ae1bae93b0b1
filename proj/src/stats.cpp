#include "specrad/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "specrad/special_functions.hpp"

namespace specrad {

std::pair<double, double> wilson_interval(long successes, long trials, double level) {
  if (trials <= 0) throw std::invalid_argument("wilson interval: trials must be > 0");
  if (successes < 0 || successes > trials)
    throw std::invalid_argument("wilson interval: successes out of range");
  if (!(level > 0.0 && level < 1.0))
    throw std::invalid_argument("wilson interval: level must lie in (0,1)");
  const double z = normal_quantile(0.5 * (1.0 + level));
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (phat + z2 / (2.0 * n)) / denom;
  const double half = z / denom * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n));
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

double ks_statistic(const std::vector<double>& samples,
                    const std::function<double(double)>& cdf) {
  if (samples.empty()) throw std::invalid_argument("ks statistic: no samples");
  std::vector<double> sorted(samples);
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max(d, std::max(f - static_cast<double>(i) / n,
                             static_cast<double>(i + 1) / n - f));
  }
  return d;
}

double binomial_se(long successes, long trials) {
  if (trials <= 0) throw std::invalid_argument("binomial se: trials must be > 0");
  const double p = static_cast<double>(successes) / static_cast<double>(trials);
  return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

}  // namespace specrad
