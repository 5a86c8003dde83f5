// Command-line front end: ingest raw event logs, run divergence tests against
// Monte Carlo nulls, bootstrap spike tests, combine p-values, and generate
// synthetic populations. Every command emits a self-contained JSON report
// embedding its resolved configuration; identical configurations and seeds
// reproduce reports byte for byte, independent of --threads.

#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cohortdiff/combine.hpp"
#include "cohortdiff/curves.hpp"
#include "cohortdiff/errors.hpp"
#include "cohortdiff/event_model.hpp"
#include "cohortdiff/io.hpp"
#include "cohortdiff/report.hpp"
#include "cohortdiff/resampling.hpp"
#include "cohortdiff/rng.hpp"
#include "cohortdiff/stats.hpp"
#include "cohortdiff/synthgen.hpp"
#include "cohortdiff/timeparse.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace cohortdiff;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitInputError = 2;
constexpr int kExitDegenerate = 3;

int resolve_threads(int threads) {
    if (threads > 0) return threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// --- synth ----------------------------------------------------------------

struct SynthArgs {
    std::string out_dir;
    std::int64_t n_a = 500, n_b = 500;
    double base_rate = 40.0;
    double activity_ratio = 1.18;
    double heterogeneity = 0.0;
    std::vector<double> shape;
    int weeks = 8;
    std::uint64_t seed = 1;
    std::string anchor = "2017-04-07 00:00:00";
    double t_max_hours = 24.0;
    std::string label_a = "A", label_b = "B";
    std::string kind = "communication";
    // kernel
    double response_onset = -1.0; // < 0: no kernel
    std::string response_shape = "exponential_decay";
    double amplitude_a = 1.0, amplitude_b = 1.0;
    double decay_a = 2.0, decay_b = 2.0;
};

SyntheticSpec spec_from_args(const SynthArgs& a) {
    SyntheticSpec spec;
    spec.n_a = a.n_a;
    spec.n_b = a.n_b;
    spec.base_rate = a.base_rate;
    spec.activity_ratio = a.activity_ratio;
    spec.heterogeneity = a.heterogeneity;
    spec.seed = a.seed;
    spec.attack_start = parse_time_point(a.anchor);
    spec.t_max_hours = a.t_max_hours;
    spec.label_a = a.label_a;
    spec.label_b = a.label_b;
    if (!a.shape.empty()) {
        if (a.shape.size() != 24)
            throw InputError("--shape needs exactly 24 hourly weights, got " +
                             std::to_string(a.shape.size()));
        for (std::size_t h = 0; h < 24; ++h) spec.diurnal_shape[h] = a.shape[h];
    }
    if (a.response_onset >= 0.0) {
        ResponseKernel k;
        k.onset_h = a.response_onset;
        k.shape = kernel_shape_from_string(a.response_shape);
        k.amplitude_a = a.amplitude_a;
        k.amplitude_b = a.amplitude_b;
        k.decay_a_h = a.decay_a;
        k.decay_b_h = a.decay_b;
        spec.response = k;
    }
    spec.validate();
    return spec;
}

json synth_config_json(const SynthArgs& a, const SyntheticSpec& spec) {
    json c;
    c["n_a"] = spec.n_a;
    c["n_b"] = spec.n_b;
    c["base_rate"] = spec.base_rate;
    c["activity_ratio"] = spec.activity_ratio;
    c["heterogeneity"] = spec.heterogeneity;
    c["diurnal_shape"] = spec.diurnal_shape;
    c["weeks"] = a.weeks;
    c["seed"] = spec.seed;
    c["anchor_epoch_s"] = spec.attack_start;
    c["t_max_hours"] = spec.t_max_hours;
    c["labels"] = {spec.label_a, spec.label_b};
    c["kind"] = a.kind;
    if (spec.response) {
        const ResponseKernel& k = *spec.response;
        c["response"] = {{"onset_h", k.onset_h},
                         {"shape", to_string(k.shape)},
                         {"amplitude_a", k.amplitude_a},
                         {"amplitude_b", k.amplitude_b},
                         {"decay_a_h", k.decay_a_h},
                         {"decay_b_h", k.decay_b_h}};
    }
    return c;
}

int run_synth(const SynthArgs& a) {
    if (a.weeks < 0) throw InputError("--weeks must be >= 0");
    const SyntheticSpec spec = spec_from_args(a);
    const StudyDataset ds = generate(spec, a.weeks);

    fs::create_directories(a.out_dir);
    const auto events = dataset_to_events(ds, a.kind);
    write_events_csv(events, (fs::path(a.out_dir) / "events.csv").string());

    std::map<std::string, std::string> cohorts;
    for (std::size_t i = 0; i < ds.ids.size(); ++i) cohorts[ds.ids[i]] = ds.cohort[i];
    write_cohorts_csv(cohorts, (fs::path(a.out_dir) / "cohorts.csv").string());

    json body;
    body["events_written"] = events.size();
    body["individuals"] = ds.ids.size();
    json per_window = json::array();
    for (std::size_t w = 0; w < ds.window_logs.size(); ++w)
        per_window.push_back(ds.events_in_window(w));
    body["events_per_window"] = std::move(per_window);
    const json report = make_report("synth", synth_config_json(a, spec), std::move(body));
    write_text_file((fs::path(a.out_dir) / "synth_summary.json").string(), dump_report(report));

    std::cout << "wrote " << events.size() << " events for " << ds.ids.size()
              << " individuals to " << a.out_dir << "\n";
    return kExitOk;
}

// --- ingest ----------------------------------------------------------------

struct IngestArgs {
    std::string events_path;
    std::string cohorts_path;
    std::string gps_path;
    std::string boxes_path;
    std::string city;
    double grid_step = 0.01;
    std::string anchor;
    double t_max_hours = 24.0;
    int weeks = 8;
    std::string kind;
    std::string output;
};

int run_ingest(const IngestArgs& a) {
    const double anchor = parse_time_point(a.anchor);
    const AnalysisWindow attack{anchor, a.t_max_hours * 3600.0};

    auto cohorts = read_cohort_map(a.cohorts_path);

    json selection;
    std::int64_t dropped_outside_box = 0;
    if (!a.gps_path.empty()) {
        if (a.city.empty()) throw InputError("--gps needs --city to pick a bounding box");
        const auto boxes = a.boxes_path.empty() ? default_city_boxes() : read_city_boxes(a.boxes_path);
        const auto box_it = boxes.find(a.city);
        if (box_it == boxes.end()) throw InputError("unknown city '" + a.city + "'");

        const auto gps = read_gps(a.gps_path);
        std::map<std::string, std::vector<GpsRecord>> per_id;
        for (const auto& r : gps) per_id[r.individual_id].push_back(r);
        std::map<std::string, std::pair<double, double>> homes;
        for (const auto& [id, recs] : per_id) homes[id] = home_location(recs, a.grid_step);

        const auto selected = select_cohort(homes, box_it->second);
        const std::set<std::string> keep(selected.begin(), selected.end());
        json dropped = json::array();
        for (auto it = cohorts.begin(); it != cohorts.end();) {
            if (!keep.count(it->first)) {
                dropped.push_back(it->first);
                ++dropped_outside_box;
                it = cohorts.erase(it);
            } else {
                ++it;
            }
        }
        if (cohorts.empty())
            throw DegenerateError("no individuals left after bounding-box selection");
        selection["city"] = a.city;
        selection["grid_step_deg"] = a.grid_step;
        selection["dropped_outside_box"] = std::move(dropped);
    }

    const auto events = read_events(a.events_path);
    IngestSummary summary;
    const StudyDataset ds = slice_background(events, attack, a.weeks, cohorts, &summary, a.kind);

    json s;
    s["individuals"] = ds.ids.size();
    s["cohort_sizes"] = ds.cohort_sizes();
    s["events_seen"] = summary.events_seen;
    s["events_in_attack_window"] = summary.events_in_window;
    s["events_wrong_kind"] = summary.events_wrong_kind;
    s["skipped_ids"] = summary.skipped_ids;
    s["dropped_outside_box"] = dropped_outside_box;
    if (!selection.is_null()) s["selection"] = selection;
    json per_window = json::array();
    for (std::size_t w = 0; w < ds.window_logs.size(); ++w)
        per_window.push_back(ds.events_in_window(w));
    s["events_per_window"] = per_window;

    // Plot-ready hourly profiles per cohort: attack day, background weeks,
    // and the day normalized by the per-bin background mean.
    const double t_max = ds.attack_window.t_max_hours();
    json diurnal;
    for (const auto& [label, size] : ds.cohort_sizes()) {
        (void)size;
        auto logs_of = [&](std::size_t w) {
            std::vector<IndividualLog> logs;
            for (const auto& log : ds.window_logs[w])
                if (log.cohort == label) logs.push_back(log);
            return logs;
        };
        const DiurnalProfile day = diurnal_profile(logs_of(0), 1.0, t_max);
        std::vector<DiurnalProfile> background;
        json bg_json = json::array();
        for (int w = 1; w <= ds.weeks(); ++w) {
            background.push_back(diurnal_profile(logs_of(static_cast<std::size_t>(w)), 1.0, t_max));
            bg_json.push_back(profile_to_json(background.back()));
        }
        json entry;
        entry["day"] = profile_to_json(day);
        entry["background"] = std::move(bg_json);
        entry["day_over_background"] = ratios_to_json(normalize_to_background(day, background));
        diurnal[label] = std::move(entry);
    }
    s["diurnal"] = std::move(diurnal);

    write_dataset_archive(ds, s, a.output);
    std::cout << "dataset: " << ds.ids.size() << " individuals, " << a.weeks
              << " background weeks, events per window " << per_window.dump() << "\n";
    if (!summary.skipped_ids.empty())
        std::cout << "skipped " << summary.skipped_ids.size()
                  << " unknown ids (see archive summary)\n";
    return kExitOk;
}

// --- test ------------------------------------------------------------------

struct TestArgs {
    std::string dataset;
    std::string model;
    std::int64_t replicates = 100000;
    std::uint64_t seed = 1;
    int threads = 0;
    std::string output;
    bool full_samples = false;
    std::string background_sampling = "pool";
};

int run_test(const TestArgs& a) {
    const NullModel model = null_model_from_string(a.model);
    if (model == NullModel::spike_bootstrap)
        throw InputError("use the spike command for the bootstrap spike test");

    const std::string dataset_bytes = read_text_file(a.dataset);
    const StudyDataset ds = read_dataset_archive(a.dataset);
    const auto [label_a, label_b] = two_labels(ds.day_logs());
    const auto sizes = ds.cohort_sizes();

    json config;
    config["model"] = a.model;
    config["replicates"] = a.replicates;
    config["seed"] = a.seed;
    config["dataset_hash"] = hash_hex(dataset_bytes);
    config["t_max_hours"] = ds.attack_window.t_max_hours();
    config["full_samples"] = a.full_samples;
    if (model == NullModel::background) config["background_sampling"] = a.background_sampling;

    NullDistribution null;
    const int threads = resolve_threads(a.threads);
    if (model == NullModel::shuffle) {
        null = shuffle_null(ds.day_logs(), sizes.at(label_a), a.replicates, a.seed, threads,
                            ds.attack_window.t_max_hours());
    } else {
        BackgroundSampling sampling;
        if (a.background_sampling == "pool")
            sampling = BackgroundSampling::pool_with_replacement;
        else if (a.background_sampling == "per-individual-week")
            sampling = BackgroundSampling::per_individual_week;
        else
            throw InputError("--background-sampling must be pool|per-individual-week");
        null = background_null(ds, a.replicates, a.seed, threads, sampling);
    }

    const EmpiricalP raw = empirical_p(null, false);
    const EmpiricalP smoothed = empirical_p(null, true);

    json body;
    json cohorts;
    std::vector<IndividualLog> day_a, day_b;
    for (const auto& log : ds.day_logs()) (log.cohort == label_a ? day_a : day_b).push_back(log);
    const double t_max = ds.attack_window.t_max_hours();
    const auto curve_a = CumulativeCurve::from_logs(day_a, t_max);
    const auto curve_b = CumulativeCurve::from_logs(day_b, t_max);
    cohorts[label_a] = {{"individuals", sizes.at(label_a)}, {"events", curve_a.total_events()}};
    cohorts[label_b] = {{"individuals", sizes.at(label_b)}, {"events", curve_b.total_events()}};
    body["cohorts"] = std::move(cohorts);
    body["curves"] = {{label_a, curve_to_json(curve_a)}, {label_b, curve_to_json(curve_b)}};
    body["observed_delta_hours"] = null.observed;
    body["null"] = null_to_json(null, a.full_samples);
    body["p"] = empirical_p_to_json(raw, smoothed);
    body["significant"] = {{"at_0.05", raw.p < 0.05}, {"at_0.01", raw.p < 0.01}};

    const json report = make_report("test", config, std::move(body));
    write_text_file(a.output, dump_report(report));
    std::cout << "observed delta " << null.observed << " h, raw p = " << raw.p
              << " (R = " << a.replicates << ")\n";
    return kExitOk;
}

// --- spike -----------------------------------------------------------------

struct SpikeArgs {
    std::string dataset;
    std::string cohort;
    std::string week = "all";
    std::int64_t replicates = 100000;
    std::uint64_t seed = 1;
    int threads = 0;
    std::string transform;
    std::string tail;
    std::string output;
    std::vector<double> pvalues; // direct combine mode, skips resampling
    bool full_samples = false;
};

int run_spike(const SpikeArgs& a) {
    const Transform transform = transform_from_string(a.transform);
    const Tail tail = tail_from_string(a.tail);

    if (!a.pvalues.empty()) {
        const auto combined = fisher_combine(a.pvalues, transform, tail);
        json config;
        config["pvalues"] = a.pvalues;
        config["transform"] = a.transform;
        config["tail"] = a.tail;
        json body;
        body["combined"] = combined_to_json(combined);
        const json report = make_report("spike", config, std::move(body));
        if (!a.output.empty()) write_text_file(a.output, dump_report(report));
        std::cout << "combined p = " << combined.p_combined << " (" << a.transform << ", "
                  << a.tail << ")\n";
        return kExitOk;
    }

    if (a.dataset.empty()) throw InputError("spike needs --dataset (or --pvalues)");
    if (a.cohort.empty()) throw InputError("spike needs --cohort");
    const std::string dataset_bytes = read_text_file(a.dataset);
    const StudyDataset ds = read_dataset_archive(a.dataset);
    if (ds.weeks() < 1) throw InputError("dataset has no background weeks");

    std::vector<int> weeks;
    if (a.week == "all") {
        for (int w = 1; w <= ds.weeks(); ++w) weeks.push_back(w);
    } else {
        try {
            weeks.push_back(std::stoi(a.week));
        } catch (const std::exception&) {
            throw InputError("--week must be a week index or 'all'");
        }
    }

    json config;
    config["cohort"] = a.cohort;
    config["week"] = a.week;
    config["replicates"] = a.replicates;
    config["seed"] = a.seed;
    config["transform"] = a.transform;
    config["tail"] = a.tail;
    config["dataset_hash"] = hash_hex(dataset_bytes);
    config["full_samples"] = a.full_samples;

    const int threads = resolve_threads(a.threads);
    json week_entries = json::array();
    std::vector<double> inputs;
    bool any_clamped = false;
    for (int w : weeks) {
        const auto null = spike_null(ds, a.cohort, w, a.replicates,
                                     derive_stream(a.seed, static_cast<std::uint64_t>(w)), threads);
        const EmpiricalP raw = empirical_p(null, false);
        const EmpiricalP smoothed = empirical_p(null, true);
        // The combination takes a log; exact 0 (and exact 1 under one_minus)
        // falls back to the smoothed value and marks the result a bound.
        const double transformed = transform == Transform::direct ? raw.p : 1.0 - raw.p;
        if (transformed <= 0.0) {
            inputs.push_back(smoothed.p);
            any_clamped = true;
        } else {
            inputs.push_back(raw.p);
        }
        json entry;
        entry["week"] = w;
        entry["null"] = null_to_json(null, a.full_samples);
        entry["p"] = empirical_p_to_json(raw, smoothed);
        week_entries.push_back(std::move(entry));
    }

    json body;
    body["weeks"] = std::move(week_entries);
    if (inputs.size() > 1 || a.week == "all") {
        const auto combined = fisher_combine(inputs, transform, tail);
        body["combined"] = combined_to_json(combined);
        body["combined_inputs_smoothed"] = any_clamped;
        if (any_clamped)
            body["combined_note"] =
                "raw zero clamped to the smoothed value; combined p is a conservative bound";
        std::cout << "combined p = " << combined.p_combined << " over " << inputs.size()
                  << " weeks (" << a.transform << ", " << a.tail << ")\n";
    } else {
        std::cout << "week " << weeks[0] << " raw p = " << inputs[0] << "\n";
    }
    const json report = make_report("spike", config, std::move(body));
    write_text_file(a.output, dump_report(report));
    return kExitOk;
}

// --- combine -----------------------------------------------------------------

struct CombineArgs {
    std::vector<double> pvalues;
    std::string transform;
    std::string tail;
    std::int64_t floor_replicates = 0; // > 0: clamp zeros to 1/R
    std::string output;
};

int run_combine(const CombineArgs& a) {
    const Transform transform = transform_from_string(a.transform);
    const Tail tail = tail_from_string(a.tail);

    std::vector<double> inputs = a.pvalues;
    bool clamped = false;
    if (a.floor_replicates > 0) {
        const double floor = 1.0 / static_cast<double>(a.floor_replicates);
        for (double& p : inputs) {
            if (p == 0.0) {
                p = floor;
                clamped = true;
            } else if (transform == Transform::one_minus && p == 1.0) {
                p = 1.0 - floor;
                clamped = true;
            }
        }
    }

    const auto combined = fisher_combine(inputs, transform, tail);
    json config;
    config["pvalues"] = a.pvalues;
    config["transform"] = a.transform;
    config["tail"] = a.tail;
    if (a.floor_replicates > 0) config["floor_replicates"] = a.floor_replicates;
    json body;
    body["combined"] = combined_to_json(combined);
    if (clamped) {
        body["inputs_clamped_to_floor"] = true;
        body["combined_note"] = "zero inputs clamped to the 1/R resolution floor; "
                                "combined p is a bound";
    }
    const json report = make_report("combine", config, std::move(body));
    const std::string text = dump_report(report);
    if (a.output.empty())
        std::cout << text;
    else
        write_text_file(a.output, text);
    if (!a.output.empty())
        std::cout << "T = " << combined.t_statistic << ", dof = " << combined.dof
                  << ", combined p = " << combined.p_combined << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cohortdiff: differential behavior change between two cohorts "
                 "from timestamped event streams"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);
    app.set_config("--config", "", "TOML config file; command-line flags override it");

    SynthArgs synth;
    CLI::App* synth_cmd = app.add_subcommand("synth", "generate a synthetic two-cohort population");
    synth_cmd->add_option("--out-dir", synth.out_dir, "output directory")->required();
    synth_cmd->add_option("--n-a", synth.n_a, "cohort A size");
    synth_cmd->add_option("--n-b", synth.n_b, "cohort B size");
    synth_cmd->add_option("--base-rate", synth.base_rate, "events per individual per window");
    synth_cmd->add_option("--activity-ratio", synth.activity_ratio, "cohort A rate multiplier");
    synth_cmd->add_option("--heterogeneity", synth.heterogeneity,
                          "log-normal sigma of per-individual rates");
    synth_cmd->add_option("--shape", synth.shape, "24 hourly diurnal weights")->expected(24);
    synth_cmd->add_option("--weeks", synth.weeks, "background weeks");
    synth_cmd->add_option("--seed", synth.seed, "master seed");
    synth_cmd->add_option("--anchor", synth.anchor, "attack-day window start");
    synth_cmd->add_option("--t-max-hours", synth.t_max_hours, "window length in hours");
    synth_cmd->add_option("--label-a", synth.label_a, "cohort A label");
    synth_cmd->add_option("--label-b", synth.label_b, "cohort B label");
    synth_cmd->add_option("--kind", synth.kind, "event kind tag to write");
    synth_cmd->add_option("--response-onset", synth.response_onset,
                          "kernel onset hour (omit for no response)");
    synth_cmd->add_option("--response-shape", synth.response_shape,
                          "exponential_decay|boxcar");
    synth_cmd->add_option("--response-amplitude-a", synth.amplitude_a, "cohort A amplitude");
    synth_cmd->add_option("--response-amplitude-b", synth.amplitude_b, "cohort B amplitude");
    synth_cmd->add_option("--response-decay-a", synth.decay_a, "cohort A decay hours");
    synth_cmd->add_option("--response-decay-b", synth.decay_b, "cohort B decay hours");

    IngestArgs ingest;
    CLI::App* ingest_cmd =
        app.add_subcommand("ingest", "slice raw events into an analysis dataset");
    ingest_cmd->add_option("--events", ingest.events_path, "events CSV or JSONL")->required();
    ingest_cmd->add_option("--cohorts", ingest.cohorts_path, "cohort map CSV (id,label)")
        ->required();
    ingest_cmd->add_option("--gps", ingest.gps_path, "GPS CSV/JSONL for home selection");
    ingest_cmd->add_option("--boxes", ingest.boxes_path, "bounding-box JSON (defaults built in)");
    ingest_cmd->add_option("--city", ingest.city, "city key for the bounding box");
    ingest_cmd->add_option("--grid-step", ingest.grid_step, "home-location grid in degrees");
    ingest_cmd->add_option("--anchor", ingest.anchor, "attack window start (ISO or epoch)")
        ->required();
    ingest_cmd->add_option("--t-max-hours", ingest.t_max_hours, "window length in hours");
    ingest_cmd->add_option("--weeks", ingest.weeks, "background weeks");
    ingest_cmd->add_option("--kind", ingest.kind, "keep only events of this kind");
    ingest_cmd->add_option("--output", ingest.output, "dataset archive path")->required();

    TestArgs test;
    CLI::App* test_cmd = app.add_subcommand("test", "divergence test against a Monte Carlo null");
    test_cmd->add_option("--dataset", test.dataset, "dataset archive")->required();
    test_cmd->add_option("--model", test.model, "shuffle|background")->required();
    test_cmd->add_option("--replicates,-R", test.replicates, "Monte Carlo replicates");
    test_cmd->add_option("--seed", test.seed, "master seed");
    test_cmd->add_option("--threads", test.threads, "worker threads (0 = all cores)");
    test_cmd->add_option("--output", test.output, "report path")->required();
    test_cmd->add_flag("--full-samples", test.full_samples, "dump all null samples");
    test_cmd->add_option("--background-sampling", test.background_sampling,
                         "pool|per-individual-week");

    SpikeArgs spike;
    CLI::App* spike_cmd =
        app.add_subcommand("spike", "bootstrap spike test per background week");
    spike_cmd->add_option("--dataset", spike.dataset, "dataset archive");
    spike_cmd->add_option("--cohort", spike.cohort, "cohort label to test");
    spike_cmd->add_option("--week", spike.week, "week index or 'all'");
    spike_cmd->add_option("--replicates,-R", spike.replicates, "Monte Carlo replicates");
    spike_cmd->add_option("--seed", spike.seed, "master seed");
    spike_cmd->add_option("--threads", spike.threads, "worker threads (0 = all cores)");
    spike_cmd->add_option("--transform", spike.transform, "direct|one_minus")->required();
    spike_cmd->add_option("--tail", spike.tail, "upper|lower")->required();
    spike_cmd->add_option("--output", spike.output, "report path");
    spike_cmd->add_option("--pvalues", spike.pvalues,
                          "combine these per-week p-values directly");
    spike_cmd->add_flag("--full-samples", spike.full_samples, "dump all null samples");

    CombineArgs combine;
    CLI::App* combine_cmd = app.add_subcommand("combine", "chi-square combination of p-values");
    combine_cmd->add_option("--pvalues", combine.pvalues, "p-values to combine")->required();
    combine_cmd->add_option("--transform", combine.transform, "direct|one_minus")->required();
    combine_cmd->add_option("--tail", combine.tail, "upper|lower")->required();
    combine_cmd->add_option("--floor", combine.floor_replicates,
                            "clamp zeros to 1/R before combining");
    combine_cmd->add_option("--output", combine.output, "report path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitInputError;
    }

    try {
        if (app.got_subcommand(synth_cmd)) return run_synth(synth);
        if (app.got_subcommand(ingest_cmd)) return run_ingest(ingest);
        if (app.got_subcommand(test_cmd)) return run_test(test);
        if (app.got_subcommand(spike_cmd)) return run_spike(spike);
        if (app.got_subcommand(combine_cmd)) return run_combine(combine);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const DegenerateError& e) {
        std::cerr << "degenerate statistics: " << e.what() << "\n";
        return kExitDegenerate;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitFailure;
}
