#ifndef FRAGSTOCH_STATS_HPP
#define FRAGSTOCH_STATS_HPP

#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace fragstoch {

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

/// One-sample Kolmogorov-Smirnov against a continuous CDF. The p-value
/// uses the asymptotic Kolmogorov law with the Stephens small-sample
/// correction x = (sqrt(n) + 0.12 + 0.11/sqrt(n)) * D; n >= 100 is
/// enforced because the asymptotic p is meaningless below that.
KsResult ks_one_sample(std::span<const double> samples,
                       const std::function<double(double)>& cdf);

/// Two-sample KS; effective size n m/(n+m) feeds the same corrected
/// asymptotic p-value. Both sides need at least 100 points.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Monte Carlo estimate of E[exp(-q X)] with its CLT standard error.
std::pair<double, double> empirical_laplace(std::span<const double> samples, double q);

/// Sample mean and CLT standard error.
std::pair<double, double> mean_with_se(std::span<const double> samples);

} // namespace fragstoch

#endif
