#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace specrad {

// Wilson score interval for a binomial proportion, clamped to [0,1].
// Rejects trials = 0.
std::pair<double, double> wilson_interval(long successes, long trials, double level);

// Two-sided Kolmogorov-Smirnov distance between the empirical CDF of the
// samples and `cdf`, evaluated on both sides of every step.
double ks_statistic(const std::vector<double>& samples,
                    const std::function<double(double)>& cdf);

// Binomial standard error sqrt(p(1-p)/n) at the empirical proportion.
double binomial_se(long successes, long trials);

}  // namespace specrad
