#include "cohortdiff/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "cohortdiff/errors.hpp"
#include "cohortdiff/rng.hpp"

namespace cohortdiff {

namespace {

// Stream tags keeping the generator's random sub-streams disjoint.
constexpr std::uint64_t kTagEvents = 0x5e5;
constexpr std::uint64_t kTagHeterogeneity = 0x4e7;
constexpr std::uint64_t kTagBattery = 0xba7;

double kernel_factor(const ResponseKernel& k, bool cohort_a, double t) {
    if (t < k.onset_h) return 1.0;
    const double amp = cohort_a ? k.amplitude_a : k.amplitude_b;
    const double decay = cohort_a ? k.decay_a_h : k.decay_b_h;
    if (k.shape == KernelShape::boxcar) return t < k.onset_h + decay ? amp : 1.0;
    return std::pow(amp, std::exp(-(t - k.onset_h) / decay));
}

} // namespace

KernelShape kernel_shape_from_string(const std::string& s) {
    if (s == "exponential_decay") return KernelShape::exponential_decay;
    if (s == "boxcar") return KernelShape::boxcar;
    throw InputError("unknown kernel shape '" + s + "' (expected exponential_decay|boxcar)");
}

const char* to_string(KernelShape s) {
    return s == KernelShape::exponential_decay ? "exponential_decay" : "boxcar";
}

std::array<double, 24> default_diurnal_shape() {
    std::array<double, 24> w{};
    double sum = 0.0;
    for (int h = 0; h < 24; ++h) {
        const double morning = std::exp(-0.5 * std::pow((h - 11.0) / 3.5, 2.0));
        const double evening = std::exp(-0.5 * std::pow((h - 20.0) / 2.5, 2.0));
        w[static_cast<std::size_t>(h)] = 0.08 + 1.1 * morning + 1.3 * evening;
        sum += w[static_cast<std::size_t>(h)];
    }
    for (double& v : w) v *= 24.0 / sum;
    return w;
}

SyntheticSpec::SyntheticSpec() : diurnal_shape(default_diurnal_shape()) {}

void SyntheticSpec::validate() const {
    if (n_a < 1 || n_b < 1) throw InputError("cohort sizes must be >= 1");
    if (!(base_rate > 0.0)) throw InputError("base rate must be positive");
    if (!(activity_ratio > 0.0)) throw InputError("activity ratio must be positive");
    if (heterogeneity < 0.0) throw InputError("heterogeneity must be >= 0");
    if (!(t_max_hours > 0.0)) throw InputError("t_max must be positive");
    if (label_a == label_b) throw InputError("cohort labels must differ");
    double sum = 0.0;
    for (double v : diurnal_shape) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw InputError("diurnal shape must be finite and non-negative");
        sum += v;
    }
    if (!(sum > 0.0)) throw InputError("diurnal shape must not be all zero");
    if (response) {
        const ResponseKernel& k = *response;
        if (!(k.onset_h >= 0.0) || k.onset_h > t_max_hours)
            throw InputError("kernel onset must lie within the window");
        if (!std::isfinite(k.amplitude_a) || !std::isfinite(k.amplitude_b) ||
            k.amplitude_a < 0.0 || k.amplitude_b < 0.0)
            throw InputError("kernel amplitudes must be finite and >= 0");
        if (!(k.decay_a_h > 0.0) || !(k.decay_b_h > 0.0))
            throw InputError("kernel decay constants must be positive");
    }
}

StudyDataset generate(const SyntheticSpec& spec, int background_weeks) {
    spec.validate();
    if (background_weeks < 0) throw InputError("background week count must be >= 0");

    // Shape renormalized to mean 1 so base_rate keeps its meaning whatever
    // weights the caller supplied.
    std::array<double, 24> shape = spec.diurnal_shape;
    {
        double sum = 0.0;
        for (double v : shape) sum += v;
        for (double& v : shape) v *= 24.0 / sum;
    }
    double shape_max = 0.0;
    for (double v : shape) shape_max = std::max(shape_max, v);

    const auto total = spec.n_a + spec.n_b;
    StudyDataset ds;
    ds.attack_window = AnalysisWindow{spec.attack_start, spec.t_max_hours * 3600.0};
    for (int k = 1; k <= background_weeks; ++k)
        ds.background_windows.push_back(
            AnalysisWindow{spec.attack_start - k * 7.0 * 86400.0, spec.t_max_hours * 3600.0});

    // Zero-padded numeric suffixes keep lexicographic id order equal to
    // generation order.
    auto make_id = [](const std::string& label, std::int64_t i) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%07lld", static_cast<long long>(i));
        return label + buf;
    };

    ds.window_logs.assign(static_cast<std::size_t>(background_weeks) + 1, {});
    for (auto& wl : ds.window_logs) wl.reserve(static_cast<std::size_t>(total));

    for (std::int64_t i = 0; i < total; ++i) {
        const bool is_a = i < spec.n_a;
        const std::string label = is_a ? spec.label_a : spec.label_b;
        const std::string id = make_id(label, is_a ? i : i - spec.n_a);
        ds.ids.push_back(id);
        ds.cohort.push_back(label);

        double indiv_mult = 1.0;
        if (spec.heterogeneity > 0.0) {
            SplitMix64 het(derive_stream(derive_stream(spec.seed, kTagHeterogeneity),
                                         static_cast<std::uint64_t>(i)));
            indiv_mult = std::exp(spec.heterogeneity * het.normal());
        }
        const double cohort_mult = is_a ? spec.activity_ratio : 1.0;
        const double base_hourly = spec.base_rate / 24.0 * cohort_mult * indiv_mult;

        const std::uint64_t indiv_stream =
            derive_stream(derive_stream(spec.seed, kTagEvents), static_cast<std::uint64_t>(i));

        for (int w = 0; w <= background_weeks; ++w) {
            const bool with_kernel = w == 0 && spec.response.has_value();
            double amp_ceiling = 1.0;
            if (with_kernel)
                amp_ceiling =
                    std::max(1.0, is_a ? spec.response->amplitude_a : spec.response->amplitude_b);
            const double envelope = base_hourly * shape_max * amp_ceiling;

            SplitMix64 rng(derive_stream(indiv_stream, static_cast<std::uint64_t>(w)));
            std::vector<double> offsets;
            if (envelope > 0.0) {
                double t = rng.exponential(envelope);
                while (t < spec.t_max_hours) {
                    const int hour = static_cast<int>(t) % 24;
                    double rate = base_hourly * shape[static_cast<std::size_t>(hour)];
                    if (with_kernel) rate *= kernel_factor(*spec.response, is_a, t);
                    if (rng.uniform01() * envelope < rate) offsets.push_back(t);
                    t += rng.exponential(envelope);
                }
            }
            ds.window_logs[static_cast<std::size_t>(w)].push_back(
                IndividualLog{id, label, std::move(offsets)});
        }
    }
    return ds;
}

std::vector<double> null_battery(const SyntheticSpec& spec, int datasets,
                                 const NullBatteryConfig& config) {
    spec.validate();
    if (datasets < 1) throw InputError("dataset count must be >= 1");
    if (config.model == NullModel::spike_bootstrap)
        throw InputError("null battery supports shuffle and background models");

    // Uniformity of the returned p-values is only expected when the two
    // cohorts follow the same law (no kernel, or identical kernels); with an
    // asymmetric kernel the battery doubles as a power probe.
    const std::uint64_t battery = derive_stream(spec.seed, kTagBattery);
    std::vector<double> pvalues;
    pvalues.reserve(static_cast<std::size_t>(datasets));
    for (int d = 0; d < datasets; ++d) {
        SyntheticSpec s = spec;
        s.seed = derive_stream(battery, static_cast<std::uint64_t>(2 * d));
        const std::uint64_t null_seed = derive_stream(battery, static_cast<std::uint64_t>(2 * d + 1));
        if (config.model == NullModel::shuffle) {
            const StudyDataset ds = generate(s, 0);
            const NullDistribution null =
                shuffle_null(ds.day_logs(), s.n_a, config.replicates, null_seed, config.threads,
                             s.t_max_hours);
            pvalues.push_back(empirical_p(null, false).p);
        } else {
            const StudyDataset ds = generate(s, config.background_weeks);
            const NullDistribution null =
                background_null(ds, config.replicates, null_seed, config.threads);
            pvalues.push_back(empirical_p(null, false).p);
        }
    }
    return pvalues;
}

} // namespace cohortdiff
