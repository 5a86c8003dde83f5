#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cohortdiff/event_model.hpp"

namespace cohortdiff {

enum class NullModel { shuffle, background, spike_bootstrap };

const char* to_string(NullModel m);
NullModel null_model_from_string(const std::string& s);

// Monte Carlo sample of area divergences under a null, plus the observed
// value it is compared against. Replicate k is a pure function of (seed, k);
// see rng.hpp for the stream contract. `redraws` counts resamples rejected
// because a pseudo-group ended up with zero events.
struct NullDistribution {
    std::vector<double> samples; // hours, one per replicate
    std::int64_t replicates = 0;
    double observed = 0.0; // hours
    std::uint64_t seed = 0;
    NullModel model = NullModel::shuffle;
    std::int64_t redraws = 0;
    double t_max = 0.0; // hours
};

struct EmpiricalP {
    double p = 0.0;
    std::int64_t count_ge = 0;
    std::int64_t replicates = 0;
    bool smoothed = false;
};

// Label-shuffle null: each replicate re-partitions the day's individuals into
// pseudo-groups of sizes (size_a, rest) uniformly at random and records the
// area between the pseudo-group curves. The observed value is the area
// between the two truly labeled groups. size_a must equal the size of the
// lexicographically first cohort so pseudo-group sizes match the real ones.
NullDistribution shuffle_null(std::span<const IndividualLog> day_logs, std::int64_t size_a,
                              std::int64_t replicates, std::uint64_t seed, int threads = 1,
                              double t_max_hours = 24.0);

// How background resampling fills a pseudo-cohort slot.
//  pool_with_replacement (default): any (individual, week) log of the same
//    label, drawn with replacement.
//  per_individual_week: each individual keeps their identity and contributes
//    one of their own background weeks.
enum class BackgroundSampling { pool_with_replacement, per_individual_week };

// Background-resample null: pseudo-cohorts of the original sizes built from
// background-week logs; observed is the attack-day area between the real
// cohorts.
NullDistribution background_null(const StudyDataset& study, std::int64_t replicates,
                                 std::uint64_t seed, int threads = 1,
                                 BackgroundSampling sampling =
                                     BackgroundSampling::pool_with_replacement);

// Bootstrap spike null for one cohort against its own background week i
// (1-based, 1 = the week immediately before the attack). Each replicate
// draws n logs with replacement from the cohort's n*W background pool and
// records the area between the bootstrap curve and the week-i curve.
// Observed is the area between the attack-day curve and the week-i curve.
NullDistribution spike_null(const StudyDataset& study, const std::string& cohort,
                            int week_index, std::int64_t replicates, std::uint64_t seed,
                            int threads = 1);

// Fraction of null samples at least as extreme as the observed value.
// Raw: count/R. Smoothed: (count+1)/(R+1), never exactly zero.
EmpiricalP empirical_p(const NullDistribution& null, bool smoothed);

} // namespace cohortdiff
