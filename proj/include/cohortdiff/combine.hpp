#pragma once

#include <span>
#include <string>
#include <vector>

namespace cohortdiff {

// How the inputs enter the -2 ln transform, and which chi-square tail the
// combined probability reads. Published analyses of this kind use different
// pairings in different places, so there is deliberately no default: callers
// must state the convention and it is recorded in every result.
enum class Transform { direct, one_minus };
enum class Tail { upper, lower };

const char* to_string(Transform t);
const char* to_string(Tail t);
Transform transform_from_string(const std::string& s);
Tail tail_from_string(const std::string& s);

struct CombinedTestResult {
    std::vector<double> inputs; // the probabilities as given, pre-transform
    Transform transform = Transform::direct;
    Tail tail = Tail::upper;
    double t_statistic = 0.0; // sum of -2 ln of the transformed inputs
    int dof = 0;              // 2 * inputs.size()
    double p_combined = 0.0;
};

// Survival function P(chi^2_dof > x) for even dof, by the closed-form
// Poisson series exp(-x/2) * sum_{k<dof/2} (x/2)^k / k!. The series is the
// reference path; odd dof is rejected. Accurate to well below 1e-10 relative
// for dof <= 64, x <= 200 (positive-term sum, no cancellation).
double chi2_sf(double x, int dof);

// Maps n probabilities to T = sum -2 ln X_i and refers T to chi^2 with 2n
// degrees of freedom. Transformed inputs must lie in (0, 1]; an exact zero
// (p = 0 under direct, p = 1 under one_minus) is an error instructing the
// caller to substitute a smoothed or resolution-floor value first.
CombinedTestResult fisher_combine(std::span<const double> pvalues, Transform transform,
                                  Tail tail);

} // namespace cohortdiff
