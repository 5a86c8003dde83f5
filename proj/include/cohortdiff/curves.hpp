#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cohortdiff/event_model.hpp"

namespace cohortdiff {

// Normalized cumulative activity of a population: the fraction of the
// population's events that happened at or before each hour offset. A
// right-continuous, monotone step function with C(t_max) = 1. Jump weights
// are held as exact integer event counts and divided only on read, so
// construction never accumulates floating-point drift.
class CumulativeCurve {
public:
    static CumulativeCurve from_logs(std::span<const IndividualLog> logs, double t_max_hours);
    static CumulativeCurve from_offsets(std::vector<double> pooled_offsets_hours,
                                        double t_max_hours);

    double t_max() const { return t_max_; }
    std::int64_t total_events() const { return total_events_; }
    const std::vector<double>& jump_times() const { return jump_times_; }
    const std::vector<std::int64_t>& jump_counts() const { return jump_counts_; }
    double jump_size(std::size_t i) const {
        return static_cast<double>(jump_counts_[i]) / static_cast<double>(total_events_);
    }

    // C(t): fraction of events at offsets <= t.
    double value(double t) const;

private:
    CumulativeCurve() = default;

    std::vector<double> jump_times_;        // sorted, distinct, in [0, t_max)
    std::vector<std::int64_t> jump_counts_; // positive, summing to total_events_
    std::vector<std::int64_t> cum_counts_;  // running sums of jump_counts_
    std::int64_t total_events_ = 0;
    double t_max_ = 0.0;
};

// Exact area between two curves over [0, t_max]: the integrand is piecewise
// constant, so a sweep over the merged jump times evaluates the integral
// without any binning. Returns hours, in [0, t_max].
double delta_area(const CumulativeCurve& x, const CumulativeCurve& y);

struct DiurnalProfile {
    double bin_width = 1.0; // hours
    double t_max = 24.0;    // hours
    std::vector<std::int64_t> counts;
};

// Pooled event counts per time-of-window bin; the last bin may be ragged.
DiurnalProfile diurnal_profile(std::span<const IndividualLog> logs, double bin_width_hours,
                               double t_max_hours);

// Per-bin ratio of the day's count to the mean background count in the same
// bin (default), or to the single global mean background count per bin.
// Bins with zero background mean come back as nullopt rather than inf.
enum class BackgroundMean { per_bin, global };

std::vector<std::optional<double>> normalize_to_background(
    const DiurnalProfile& day, std::span<const DiurnalProfile> background,
    BackgroundMean mean_mode = BackgroundMean::per_bin);

// Ratio of mean per-log event counts between two groups; pass one log per
// (individual, window) pair so the mean is per individual per window.
double activity_ratio(std::span<const IndividualLog> cohort_a,
                      std::span<const IndividualLog> cohort_b);

} // namespace cohortdiff
