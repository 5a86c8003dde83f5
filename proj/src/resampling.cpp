#include "cohortdiff/resampling.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <numeric>
#include <thread>

#include "cohortdiff/curves.hpp"
#include "cohortdiff/errors.hpp"
#include "cohortdiff/rng.hpp"

namespace cohortdiff {

namespace {

constexpr std::int64_t kMaxRedrawsPerReplicate = 1 << 20;

// All events of a set of source logs, sorted by offset and tagged with the
// index of the log they came from. One sweep over this array evaluates the
// area between any pair of weighted sub-populations, so a replicate costs
// O(total events) and never sorts.
struct EventPool {
    std::vector<double> time;      // hours, ascending
    std::vector<std::int32_t> src; // parallel: source log index
    std::vector<std::int64_t> events_per_source;
    double t_max = 0.0;

    std::size_t n_sources() const { return events_per_source.size(); }

    void add_source(std::span<const double> offsets) {
        const auto s = static_cast<std::int32_t>(events_per_source.size());
        for (double t : offsets) {
            if (t < 0.0 || t >= t_max) throw InputError("event offset outside [0, t_max)");
            time.push_back(t);
            src.push_back(s);
        }
        events_per_source.push_back(static_cast<std::int64_t>(offsets.size()));
    }

    void finish() {
        std::vector<std::int32_t> order(time.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
            return time[static_cast<std::size_t>(a)] < time[static_cast<std::size_t>(b)];
        });
        std::vector<double> t2(time.size());
        std::vector<std::int32_t> s2(time.size());
        for (std::size_t i = 0; i < order.size(); ++i) {
            t2[i] = time[static_cast<std::size_t>(order[i])];
            s2[i] = src[static_cast<std::size_t>(order[i])];
        }
        time = std::move(t2);
        src = std::move(s2);
    }

    std::int64_t weighted_events(std::span<const std::int64_t> mult) const {
        std::int64_t n = 0;
        for (std::size_t s = 0; s < n_sources(); ++s) n += mult[s] * events_per_source[s];
        return n;
    }

    // Area between the two step curves induced by per-source multiplicities.
    // Cumulative counts stay integral; division happens once per segment.
    double weighted_delta(std::span<const std::int64_t> mult_a,
                          std::span<const std::int64_t> mult_b, std::int64_t n_a,
                          std::int64_t n_b) const {
        const double na = static_cast<double>(n_a);
        const double nb = static_cast<double>(n_b);
        double area = 0.0;
        double prev = 0.0;
        std::int64_t ca = 0, cb = 0;
        std::size_t i = 0;
        const std::size_t n = time.size();
        while (i < n) {
            const double t = time[i];
            area += std::abs(static_cast<double>(ca) / na - static_cast<double>(cb) / nb) *
                    (t - prev);
            do {
                const auto s = static_cast<std::size_t>(src[i]);
                ca += mult_a[s];
                cb += mult_b[s];
                ++i;
            } while (i < n && time[i] == t);
            prev = t;
        }
        area += std::abs(static_cast<double>(ca) / na - static_cast<double>(cb) / nb) *
                (t_max - prev);
        return area;
    }
};

// Runs block(lo, hi) over a fixed partition of [0, n). Blocks must be
// independent; exceptions are carried back to the caller.
void parallel_for(std::int64_t n, int threads,
                  const std::function<void(std::int64_t, std::int64_t)>& block) {
    if (threads <= 1 || n < 2) {
        block(0, n);
        return;
    }
    const int workers = static_cast<int>(std::min<std::int64_t>(threads, n));
    const std::int64_t chunk = (n + workers - 1) / workers;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        const std::int64_t lo = w * chunk;
        const std::int64_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi, w] {
            try {
                block(lo, hi);
            } catch (...) {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    }
    for (std::thread& t : pool) t.join();
    for (const std::exception_ptr& e : errors)
        if (e) std::rethrow_exception(e);
}

void check_replicates(std::int64_t r) {
    if (r < 1) throw InputError("replicate count must be >= 1");
}

} // namespace

const char* to_string(NullModel m) {
    switch (m) {
        case NullModel::shuffle: return "shuffle";
        case NullModel::background: return "background";
        case NullModel::spike_bootstrap: return "spike_bootstrap";
    }
    return "?";
}

NullModel null_model_from_string(const std::string& s) {
    if (s == "shuffle") return NullModel::shuffle;
    if (s == "background") return NullModel::background;
    if (s == "spike_bootstrap" || s == "spike") return NullModel::spike_bootstrap;
    throw InputError("unknown null model '" + s + "'");
}

NullDistribution shuffle_null(std::span<const IndividualLog> day_logs, std::int64_t size_a,
                              std::int64_t replicates, std::uint64_t seed, int threads,
                              double t_max_hours) {
    check_replicates(replicates);
    const auto total = static_cast<std::int64_t>(day_logs.size());
    if (size_a <= 0 || size_a >= total)
        throw InputError("pseudo-group size must be strictly between 0 and the population size");

    const auto [label_a, label_b] = two_labels(day_logs);
    std::int64_t observed_a = 0, eventful = 0;
    for (const IndividualLog& log : day_logs) {
        if (log.cohort == label_a) ++observed_a;
        if (log.events() > 0) ++eventful;
    }
    if (size_a != observed_a)
        throw InputError("size_a = " + std::to_string(size_a) + " does not match cohort '" +
                         label_a + "' (" + std::to_string(observed_a) + " individuals)");
    if (eventful < 2)
        throw DegenerateError("shuffle null needs events from at least two individuals");

    EventPool pool;
    pool.t_max = t_max_hours;
    for (const IndividualLog& log : day_logs) pool.add_source(log.offsets);
    pool.finish();

    NullDistribution out;
    out.model = NullModel::shuffle;
    out.replicates = replicates;
    out.seed = seed;
    out.t_max = t_max_hours;
    out.samples.assign(static_cast<std::size_t>(replicates), 0.0);

    const std::size_t ns = pool.n_sources();
    std::atomic<std::int64_t> redraws{0};

    parallel_for(replicates, threads, [&](std::int64_t lo, std::int64_t hi) {
        std::vector<std::int32_t> idx(ns);
        std::vector<std::int64_t> wa(ns), wb(ns);
        std::int64_t local_redraws = 0;
        for (std::int64_t k = lo; k < hi; ++k) {
            SplitMix64 rng(derive_stream(seed, static_cast<std::uint64_t>(k)));
            std::int64_t na = 0, nb = 0, guard = 0;
            do {
                if (guard++ > kMaxRedrawsPerReplicate)
                    throw DegenerateError(
                        "shuffle null cannot find a split with events on both sides");
                std::iota(idx.begin(), idx.end(), 0);
                for (std::int64_t j = 0; j < size_a; ++j) {
                    const auto pick =
                        j + static_cast<std::int64_t>(
                                rng.below(static_cast<std::uint64_t>(total - j)));
                    std::swap(idx[static_cast<std::size_t>(j)],
                              idx[static_cast<std::size_t>(pick)]);
                }
                std::fill(wa.begin(), wa.end(), 0);
                std::fill(wb.begin(), wb.end(), 1);
                for (std::int64_t j = 0; j < size_a; ++j) {
                    const auto s = static_cast<std::size_t>(idx[static_cast<std::size_t>(j)]);
                    wa[s] = 1;
                    wb[s] = 0;
                }
                na = pool.weighted_events(wa);
                nb = pool.weighted_events(wb);
                if (na == 0 || nb == 0) ++local_redraws;
            } while (na == 0 || nb == 0);
            out.samples[static_cast<std::size_t>(k)] = pool.weighted_delta(wa, wb, na, nb);
        }
        redraws.fetch_add(local_redraws, std::memory_order_relaxed);
    });
    out.redraws = redraws.load();

    // Observed value from the true labels, through the same sweep.
    std::vector<std::int64_t> wa(ns, 0), wb(ns, 0);
    for (std::size_t s = 0; s < ns; ++s) (day_logs[s].cohort == label_a ? wa : wb)[s] = 1;
    const std::int64_t na = pool.weighted_events(wa);
    const std::int64_t nb = pool.weighted_events(wb);
    if (na == 0 || nb == 0)
        throw DegenerateError("a labeled cohort has zero events on the analysis day");
    out.observed = pool.weighted_delta(wa, wb, na, nb);
    return out;
}

NullDistribution background_null(const StudyDataset& study, std::int64_t replicates,
                                 std::uint64_t seed, int threads, BackgroundSampling sampling) {
    check_replicates(replicates);
    if (study.weeks() < 1) throw InputError("dataset has no background windows");

    const auto [label_a, label_b] = two_labels(study.day_logs());
    const double t_max = study.attack_window.t_max_hours();
    const int weeks = study.weeks();

    // Pool sources: per label, one source per (individual, background week),
    // laid out as individual-major so the per-individual-week variant can
    // address a given individual's weeks directly.
    std::vector<std::size_t> a_members, b_members; // indices into study.ids
    for (std::size_t i = 0; i < study.ids.size(); ++i)
        (study.cohort[i] == label_a ? a_members : b_members).push_back(i);

    EventPool pool;
    pool.t_max = t_max;
    for (std::size_t m : a_members)
        for (int w = 1; w <= weeks; ++w)
            pool.add_source(study.window_logs[static_cast<std::size_t>(w)][m].offsets);
    const std::size_t b_base = pool.n_sources();
    for (std::size_t m : b_members)
        for (int w = 1; w <= weeks; ++w)
            pool.add_source(study.window_logs[static_cast<std::size_t>(w)][m].offsets);
    pool.finish();

    const std::size_t a_pool_size = b_base;
    const std::size_t b_pool_size = pool.n_sources() - b_base;
    if (a_pool_size == 0 || b_pool_size == 0)
        throw DegenerateError("empty background pool for a cohort label");

    auto pool_has_events = [&](std::size_t base, std::size_t count) {
        for (std::size_t s = base; s < base + count; ++s)
            if (pool.events_per_source[s] > 0) return true;
        return false;
    };
    if (!pool_has_events(0, a_pool_size) || !pool_has_events(b_base, b_pool_size))
        throw DegenerateError("background pool for a cohort label has no events");

    const std::int64_t slots_a = static_cast<std::int64_t>(a_members.size());
    const std::int64_t slots_b = static_cast<std::int64_t>(b_members.size());

    NullDistribution out;
    out.model = NullModel::background;
    out.replicates = replicates;
    out.seed = seed;
    out.t_max = t_max;
    out.samples.assign(static_cast<std::size_t>(replicates), 0.0);

    const std::size_t ns = pool.n_sources();
    std::atomic<std::int64_t> redraws{0};

    parallel_for(replicates, threads, [&](std::int64_t lo, std::int64_t hi) {
        std::vector<std::int64_t> wa(ns), wb(ns);
        std::int64_t local_redraws = 0;
        for (std::int64_t k = lo; k < hi; ++k) {
            SplitMix64 rng(derive_stream(seed, static_cast<std::uint64_t>(k)));
            std::int64_t na = 0, nb = 0, guard = 0;
            do {
                if (guard++ > kMaxRedrawsPerReplicate)
                    throw DegenerateError("background null cannot draw pseudo-cohorts with "
                                          "events on both sides");
                std::fill(wa.begin(), wa.end(), 0);
                std::fill(wb.begin(), wb.end(), 0);
                if (sampling == BackgroundSampling::pool_with_replacement) {
                    for (std::int64_t j = 0; j < slots_a; ++j)
                        ++wa[static_cast<std::size_t>(rng.below(a_pool_size))];
                    for (std::int64_t j = 0; j < slots_b; ++j)
                        ++wb[b_base + static_cast<std::size_t>(rng.below(b_pool_size))];
                } else {
                    // Each individual keeps their slot and contributes one of
                    // their own background weeks.
                    for (std::int64_t j = 0; j < slots_a; ++j)
                        ++wa[static_cast<std::size_t>(j) * weeks +
                             static_cast<std::size_t>(rng.below(weeks))];
                    for (std::int64_t j = 0; j < slots_b; ++j)
                        ++wb[b_base + static_cast<std::size_t>(j) * weeks +
                             static_cast<std::size_t>(rng.below(weeks))];
                }
                na = pool.weighted_events(wa);
                nb = pool.weighted_events(wb);
                if (na == 0 || nb == 0) ++local_redraws;
            } while (na == 0 || nb == 0);
            out.samples[static_cast<std::size_t>(k)] = pool.weighted_delta(wa, wb, na, nb);
        }
        redraws.fetch_add(local_redraws, std::memory_order_relaxed);
    });
    out.redraws = redraws.load();

    // Observed: attack-day area between the truly labeled cohorts.
    std::vector<IndividualLog> day_a, day_b;
    for (std::size_t m : a_members) day_a.push_back(study.window_logs[0][m]);
    for (std::size_t m : b_members) day_b.push_back(study.window_logs[0][m]);
    out.observed = delta_area(CumulativeCurve::from_logs(day_a, t_max),
                              CumulativeCurve::from_logs(day_b, t_max));
    return out;
}

NullDistribution spike_null(const StudyDataset& study, const std::string& cohort,
                            int week_index, std::int64_t replicates, std::uint64_t seed,
                            int threads) {
    check_replicates(replicates);
    const int weeks = study.weeks();
    if (weeks < 1) throw InputError("dataset has no background windows");
    if (week_index < 1 || week_index > weeks)
        throw InputError("week index must be in 1.." + std::to_string(weeks));

    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < study.ids.size(); ++i)
        if (study.cohort[i] == cohort) members.push_back(i);
    if (members.empty()) throw InputError("no individuals labeled '" + cohort + "'");

    const double t_max = study.attack_window.t_max_hours();
    const auto n = static_cast<std::int64_t>(members.size());

    // Sources 0 .. n*weeks-1: the bootstrap pool, individual-major.
    // The week-i reference curve reuses the same sources with fixed weight 1.
    EventPool pool;
    pool.t_max = t_max;
    for (std::size_t m : members)
        for (int w = 1; w <= weeks; ++w)
            pool.add_source(study.window_logs[static_cast<std::size_t>(w)][m].offsets);
    pool.finish();

    const std::size_t ns = pool.n_sources();
    bool pool_eventful = false;
    for (std::size_t s = 0; s < ns; ++s)
        if (pool.events_per_source[s] > 0) pool_eventful = true;
    if (!pool_eventful) throw DegenerateError("background pool for '" + cohort + "' has no events");

    std::vector<std::int64_t> w_ref(ns, 0);
    for (std::int64_t j = 0; j < n; ++j)
        w_ref[static_cast<std::size_t>(j) * weeks + static_cast<std::size_t>(week_index - 1)] = 1;
    const std::int64_t n_ref = pool.weighted_events(w_ref);
    if (n_ref == 0)
        throw DegenerateError("cohort '" + cohort + "' has no events in background week " +
                              std::to_string(week_index));

    NullDistribution out;
    out.model = NullModel::spike_bootstrap;
    out.replicates = replicates;
    out.seed = seed;
    out.t_max = t_max;
    out.samples.assign(static_cast<std::size_t>(replicates), 0.0);

    std::atomic<std::int64_t> redraws{0};

    parallel_for(replicates, threads, [&](std::int64_t lo, std::int64_t hi) {
        std::vector<std::int64_t> wa(ns);
        std::int64_t local_redraws = 0;
        for (std::int64_t k = lo; k < hi; ++k) {
            SplitMix64 rng(derive_stream(seed, static_cast<std::uint64_t>(k)));
            std::int64_t na = 0, guard = 0;
            do {
                if (guard++ > kMaxRedrawsPerReplicate)
                    throw DegenerateError("spike null cannot draw a bootstrap sample with events");
                std::fill(wa.begin(), wa.end(), 0);
                for (std::int64_t j = 0; j < n; ++j) ++wa[static_cast<std::size_t>(rng.below(ns))];
                na = pool.weighted_events(wa);
                if (na == 0) ++local_redraws;
            } while (na == 0);
            out.samples[static_cast<std::size_t>(k)] = pool.weighted_delta(wa, w_ref, na, n_ref);
        }
        redraws.fetch_add(local_redraws, std::memory_order_relaxed);
    });
    out.redraws = redraws.load();

    // Observed: attack day against the same reference week.
    std::vector<IndividualLog> day, ref;
    for (std::size_t m : members) {
        day.push_back(study.window_logs[0][m]);
        ref.push_back(study.window_logs[static_cast<std::size_t>(week_index)][m]);
    }
    out.observed = delta_area(CumulativeCurve::from_logs(day, t_max),
                              CumulativeCurve::from_logs(ref, t_max));
    return out;
}

EmpiricalP empirical_p(const NullDistribution& null, bool smoothed) {
    if (null.replicates < 1) throw InputError("empirical p needs at least one replicate");
    std::int64_t count = 0;
    for (double s : null.samples)
        if (s >= null.observed) ++count;
    EmpiricalP p;
    p.count_ge = count;
    p.replicates = null.replicates;
    p.smoothed = smoothed;
    p.p = smoothed ? static_cast<double>(count + 1) / static_cast<double>(null.replicates + 1)
                   : static_cast<double>(count) / static_cast<double>(null.replicates);
    return p;
}

} // namespace cohortdiff
