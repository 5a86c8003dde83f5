#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cohortdiff/event_model.hpp"
#include "cohortdiff/resampling.hpp"

namespace cohortdiff {

// Multiplicative rate perturbation switched on at `onset_h`, standing in for
// a population-wide response to an external event.
//   exponential_decay: factor a^(exp(-(t-onset)/decay)), starting at the
//     amplitude and relaxing geometrically back to 1. Amplitude 1 is a
//     no-op and amplitude 0 silences the process from onset on.
//   boxcar: factor = amplitude on [onset, onset + decay), 1 elsewhere.
enum class KernelShape { exponential_decay, boxcar };

KernelShape kernel_shape_from_string(const std::string& s);
const char* to_string(KernelShape s);

struct ResponseKernel {
    double onset_h = 0.0;
    KernelShape shape = KernelShape::exponential_decay;
    double amplitude_a = 1.0, amplitude_b = 1.0; // per-cohort, >= 0
    double decay_a_h = 1.0, decay_b_h = 1.0;     // per-cohort, > 0
};

// Generative description of a two-cohort population: an inhomogeneous
// Poisson process per individual with an hourly diurnal shape, optional
// log-normal per-individual rate heterogeneity (unit median), and an
// optional response kernel applied to the final (attack-day) window.
struct SyntheticSpec {
    std::int64_t n_a = 100, n_b = 100;
    double base_rate = 40.0;      // expected events per individual per window
    double activity_ratio = 1.18; // multiplier on cohort A's rate
    std::array<double, 24> diurnal_shape;
    double heterogeneity = 0.0;   // log-normal sigma; 0 disables
    std::optional<ResponseKernel> response;
    std::uint64_t seed = 1;
    double attack_start = 1491523200.0; // 2017-04-07 00:00:00, a Friday
    double t_max_hours = 24.0;
    std::string label_a = "A", label_b = "B";

    SyntheticSpec();
    void validate() const; // throws InputError
};

// Smooth two-peak daily profile (late-morning and evening), mean 1. A
// fixture for synthetic runs, not a fit to any dataset.
std::array<double, 24> default_diurnal_shape();

// Draws the whole study: one attack-day window plus `background_weeks`
// weekly windows before it, every (individual, window) stream independent
// and a pure function of (spec.seed, individual, window). background_weeks
// may be 0 when only the day itself is needed.
StudyDataset generate(const SyntheticSpec& spec, int background_weeks);

struct NullBatteryConfig {
    std::int64_t replicates = 2000;
    std::uint64_t seed = 1;
    int threads = 1;
    NullModel model = NullModel::shuffle; // shuffle or background
    int background_weeks = 8;             // used by the background model
};

// Generates `datasets` independent populations from the spec and runs the
// chosen null on each, returning the raw empirical p-values. With no
// injected response the p-values should be uniform; a battery of them feeds
// a KS uniformity check.
std::vector<double> null_battery(const SyntheticSpec& spec, int datasets,
                                 const NullBatteryConfig& config);

} // namespace cohortdiff
