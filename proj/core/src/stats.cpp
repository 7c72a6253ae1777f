#include "fragstoch/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fragstoch/special.hpp"

namespace fragstoch {

namespace {

double corrected_p(double d, double n_eff) {
    const double rn = std::sqrt(n_eff);
    return kolmogorov_q((rn + 0.12 + 0.11 / rn) * d);
}

} // namespace

KsResult ks_one_sample(std::span<const double> samples,
                       const std::function<double(double)>& cdf) {
    const std::size_t n = samples.size();
    if (n < 100)
        throw std::invalid_argument("ks_one_sample: need >= 100 samples for asymptotic p");
    std::vector<double> x(samples.begin(), samples.end());
    std::sort(x.begin(), x.end());
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double f = cdf(x[i]);
        const double lo = static_cast<double>(i) / static_cast<double>(n);
        const double hi = static_cast<double>(i + 1) / static_cast<double>(n);
        d = std::max({d, std::fabs(f - lo), std::fabs(hi - f)});
    }
    return {d, corrected_p(d, static_cast<double>(n))};
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 100 || b.size() < 100)
        throw std::invalid_argument("ks_two_sample: need >= 100 samples on both sides");
    std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const double nx = static_cast<double>(x.size()), ny = static_cast<double>(y.size());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < x.size() && j < y.size()) {
        const double t = std::min(x[i], y[j]);
        while (i < x.size() && x[i] <= t) ++i;
        while (j < y.size() && y[j] <= t) ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
    }
    return {d, corrected_p(d, nx * ny / (nx + ny))};
}

std::pair<double, double> empirical_laplace(std::span<const double> samples, double q) {
    if (samples.empty()) throw std::invalid_argument("empirical_laplace: empty sample");
    if (!(q >= 0.0)) throw std::invalid_argument("empirical_laplace: q >= 0");
    double sum = 0.0, sumsq = 0.0;
    for (double v : samples) {
        const double e = std::exp(-q * v);
        sum += e;
        sumsq += e * e;
    }
    const double n = static_cast<double>(samples.size());
    const double mean = sum / n;
    const double var = std::max(0.0, sumsq / n - mean * mean);
    return {mean, std::sqrt(var / n)};
}

std::pair<double, double> mean_with_se(std::span<const double> samples) {
    if (samples.empty()) throw std::invalid_argument("mean_with_se: empty sample");
    double sum = 0.0;
    for (double v : samples) sum += v;
    const double n = static_cast<double>(samples.size());
    const double mean = sum / n;
    double ss = 0.0;
    for (double v : samples) ss += (v - mean) * (v - mean);
    return {mean, std::sqrt(ss / (n * std::max(1.0, n - 1.0)))};
}

} // namespace fragstoch
