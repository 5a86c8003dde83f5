#include "cohortdiff/combine.hpp"

#include <cmath>

#include "cohortdiff/errors.hpp"

namespace cohortdiff {

const char* to_string(Transform t) { return t == Transform::direct ? "direct" : "one_minus"; }
const char* to_string(Tail t) { return t == Tail::upper ? "upper" : "lower"; }

Transform transform_from_string(const std::string& s) {
    if (s == "direct") return Transform::direct;
    if (s == "one_minus") return Transform::one_minus;
    throw InputError("unknown transform '" + s + "' (expected direct|one_minus)");
}

Tail tail_from_string(const std::string& s) {
    if (s == "upper") return Tail::upper;
    if (s == "lower") return Tail::lower;
    throw InputError("unknown tail '" + s + "' (expected upper|lower)");
}

double chi2_sf(double x, int dof) {
    if (x < 0.0) throw InputError("chi2_sf requires x >= 0");
    if (dof < 2) throw InputError("chi2_sf requires dof >= 2");
    if (dof % 2 != 0)
        throw InputError("chi2_sf implements the even-dof closed form only; dof " +
                         std::to_string(dof) + " is odd");

    const double h = x / 2.0;
    const int m = dof / 2;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < m; ++k) {
        term *= h / static_cast<double>(k);
        sum += term;
    }
    const double sf = std::exp(-h) * sum;
    return sf > 1.0 ? 1.0 : sf; // guard the x ~ 0 rounding edge
}

CombinedTestResult fisher_combine(std::span<const double> pvalues, Transform transform,
                                  Tail tail) {
    if (pvalues.empty()) throw InputError("no p-values to combine");

    CombinedTestResult r;
    r.inputs.assign(pvalues.begin(), pvalues.end());
    r.transform = transform;
    r.tail = tail;
    r.dof = 2 * static_cast<int>(pvalues.size());

    double t = 0.0;
    for (double p : pvalues) {
        if (!(p > 0.0) || p > 1.0)
            throw InputError("p-value " + std::to_string(p) +
                             " outside (0, 1]; clamp raw zeros to the smoothed value "
                             "(count+1)/(R+1) or the resolution floor 1/R first");
        const double x = transform == Transform::direct ? p : 1.0 - p;
        if (x <= 0.0)
            throw InputError("transformed input is 0 (p = 1 under one_minus); clamp to the "
                             "resolution floor first");
        if (x < 1e-300)
            throw InputError("transformed input below 1e-300 would overflow the statistic");
        t += -2.0 * std::log(x);
    }
    r.t_statistic = t;
    const double sf = chi2_sf(t, r.dof);
    r.p_combined = tail == Tail::upper ? sf : 1.0 - sf;
    return r;
}

} // namespace cohortdiff
