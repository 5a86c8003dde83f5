#include "cohortdiff/curves.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "cohortdiff/errors.hpp"

namespace cohortdiff {

CumulativeCurve CumulativeCurve::from_offsets(std::vector<double> pooled, double t_max_hours) {
    if (t_max_hours <= 0.0) throw InputError("curve t_max must be positive");
    if (pooled.empty())
        throw DegenerateError("empty population activity: normalization is undefined");

    std::sort(pooled.begin(), pooled.end());
    if (pooled.front() < 0.0 || pooled.back() >= t_max_hours)
        throw InputError("event offset outside [0, t_max)");

    CumulativeCurve c;
    c.t_max_ = t_max_hours;
    c.total_events_ = static_cast<std::int64_t>(pooled.size());
    for (std::size_t i = 0; i < pooled.size();) {
        std::size_t j = i;
        while (j < pooled.size() && pooled[j] == pooled[i]) ++j;
        c.jump_times_.push_back(pooled[i]);
        c.jump_counts_.push_back(static_cast<std::int64_t>(j - i));
        c.cum_counts_.push_back(static_cast<std::int64_t>(j));
        i = j;
    }
    return c;
}

CumulativeCurve CumulativeCurve::from_logs(std::span<const IndividualLog> logs,
                                           double t_max_hours) {
    std::vector<double> pooled;
    std::size_t total = 0;
    for (const IndividualLog& log : logs) total += log.offsets.size();
    pooled.reserve(total);
    for (const IndividualLog& log : logs)
        pooled.insert(pooled.end(), log.offsets.begin(), log.offsets.end());
    return from_offsets(std::move(pooled), t_max_hours);
}

double CumulativeCurve::value(double t) const {
    // Count of jump times <= t, as a fraction.
    const auto it = std::upper_bound(jump_times_.begin(), jump_times_.end(), t);
    if (it == jump_times_.begin()) return 0.0;
    const auto idx = static_cast<std::size_t>(it - jump_times_.begin()) - 1;
    return static_cast<double>(cum_counts_[idx]) / static_cast<double>(total_events_);
}

double delta_area(const CumulativeCurve& x, const CumulativeCurve& y) {
    if (x.t_max() != y.t_max())
        throw InputError("curves span different windows (t_max mismatch)");

    const auto& tx = x.jump_times();
    const auto& ty = y.jump_times();
    const double nx = static_cast<double>(x.total_events());
    const double ny = static_cast<double>(y.total_events());

    double area = 0.0;
    std::int64_t cx = 0, cy = 0;
    std::size_t i = 0, j = 0;
    double prev = 0.0;
    while (i < tx.size() || j < ty.size()) {
        const double t = (j == ty.size() || (i < tx.size() && tx[i] <= ty[j])) ? tx[i] : ty[j];
        area += std::abs(static_cast<double>(cx) / nx - static_cast<double>(cy) / ny) * (t - prev);
        while (i < tx.size() && tx[i] == t) cx += x.jump_counts()[i++];
        while (j < ty.size() && ty[j] == t) cy += y.jump_counts()[j++];
        prev = t;
    }
    area += std::abs(static_cast<double>(cx) / nx - static_cast<double>(cy) / ny) *
            (x.t_max() - prev);
    return area;
}

DiurnalProfile diurnal_profile(std::span<const IndividualLog> logs, double bin_width_hours,
                               double t_max_hours) {
    if (bin_width_hours <= 0.0) throw InputError("bin width must be positive");
    if (t_max_hours <= 0.0) throw InputError("t_max must be positive");

    const std::size_t bins = static_cast<std::size_t>(std::ceil(t_max_hours / bin_width_hours));
    DiurnalProfile p{bin_width_hours, t_max_hours, std::vector<std::int64_t>(bins, 0)};
    for (const IndividualLog& log : logs) {
        for (double t : log.offsets) {
            if (t < 0.0 || t >= t_max_hours) throw InputError("event offset outside [0, t_max)");
            const auto b = std::min(static_cast<std::size_t>(t / bin_width_hours), bins - 1);
            ++p.counts[b];
        }
    }
    return p;
}

std::vector<std::optional<double>> normalize_to_background(
    const DiurnalProfile& day, std::span<const DiurnalProfile> background,
    BackgroundMean mean_mode) {
    if (background.empty()) throw InputError("no background profiles");
    for (const DiurnalProfile& b : background)
        if (b.counts.size() != day.counts.size() || b.bin_width != day.bin_width)
            throw InputError("profile shape mismatch");

    double global_mean = 0.0;
    if (mean_mode == BackgroundMean::global) {
        std::int64_t total = 0;
        for (const DiurnalProfile& b : background)
            for (std::int64_t c : b.counts) total += c;
        global_mean = static_cast<double>(total) /
                      static_cast<double>(background.size() * day.counts.size());
    }

    std::vector<std::optional<double>> ratios(day.counts.size());
    for (std::size_t i = 0; i < day.counts.size(); ++i) {
        double bg_mean = global_mean;
        if (mean_mode == BackgroundMean::per_bin) {
            std::int64_t sum = 0;
            for (const DiurnalProfile& b : background) sum += b.counts[i];
            bg_mean = static_cast<double>(sum) / static_cast<double>(background.size());
        }
        if (bg_mean > 0.0)
            ratios[i] = static_cast<double>(day.counts[i]) / bg_mean;
        else
            ratios[i] = std::nullopt;
    }
    return ratios;
}

double activity_ratio(std::span<const IndividualLog> cohort_a,
                      std::span<const IndividualLog> cohort_b) {
    if (cohort_a.empty() || cohort_b.empty())
        throw DegenerateError("activity ratio of an empty cohort");
    std::int64_t ea = 0, eb = 0;
    for (const IndividualLog& log : cohort_a) ea += log.events();
    for (const IndividualLog& log : cohort_b) eb += log.events();
    const double mean_a = static_cast<double>(ea) / static_cast<double>(cohort_a.size());
    const double mean_b = static_cast<double>(eb) / static_cast<double>(cohort_b.size());
    if (mean_b == 0.0) throw DegenerateError("reference cohort has zero events");
    return mean_a / mean_b;
}

} // namespace cohortdiff
