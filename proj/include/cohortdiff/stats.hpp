#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace cohortdiff {

// One-sample Kolmogorov-Smirnov statistic against Uniform(0,1):
// D = sup_x |F_n(x) - x|.
double ks_statistic_uniform(std::span<const double> values);

// Asymptotic KS p-value with the Stephens small-sample correction,
// P(D >= d) for n observations.
double ks_pvalue(double d, std::size_t n);

double mean(std::span<const double> values);

// Linear-interpolation quantile of a sorted ascending sample (type 7).
double quantile_sorted(std::span<const double> sorted, double prob);

} // namespace cohortdiff
