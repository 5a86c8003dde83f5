#include "cohortdiff/stats.hpp"

#include <algorithm>
#include <cmath>

#include "cohortdiff/errors.hpp"

namespace cohortdiff {

double ks_statistic_uniform(std::span<const double> values) {
    if (values.empty()) throw DegenerateError("KS statistic of an empty sample");
    std::vector<double> v(values.begin(), values.end());
    std::sort(v.begin(), v.end());
    const double n = static_cast<double>(v.size());
    double d = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double hi = (static_cast<double>(i) + 1.0) / n - v[i];
        const double lo = v[i] - static_cast<double>(i) / n;
        d = std::max(d, std::max(hi, lo));
    }
    return d;
}

double ks_pvalue(double d, std::size_t n) {
    // Q_KS(lambda) = 2 sum_j (-1)^{j-1} exp(-2 j^2 lambda^2), evaluated with
    // the sqrt(n) + 0.12 + 0.11/sqrt(n) effective sample size.
    const double sn = std::sqrt(static_cast<double>(n));
    const double lambda = (sn + 0.12 + 0.11 / sn) * d;
    if (lambda < 1e-9) return 1.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int j = 1; j <= 100; ++j) {
        const double term = std::exp(-2.0 * j * j * lambda * lambda);
        sum += sign * term;
        sign = -sign;
        if (term < 1e-16 * std::abs(sum)) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

double mean(std::span<const double> values) {
    if (values.empty()) throw DegenerateError("mean of an empty sample");
    double s = 0.0;
    for (double v : values) s += v;
    return s / static_cast<double>(values.size());
}

double quantile_sorted(std::span<const double> sorted, double prob) {
    if (sorted.empty()) throw DegenerateError("quantile of an empty sample");
    if (sorted.size() == 1) return sorted[0];
    const double h = prob * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

} // namespace cohortdiff
