#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace cohortdiff {

// A single raw usage event. Timestamps are absolute seconds in the dataset's
// declared zone (epoch seconds when that zone is UTC).
struct EventRecord {
    std::string individual_id;
    double timestamp = 0.0;
    std::string kind;
};

struct GpsRecord {
    std::string individual_id;
    double timestamp = 0.0;
    double lat = 0.0;
    double lon = 0.0;
};

struct GeoBoundingBox {
    double min_lat = 0.0, max_lat = 0.0;
    double min_lon = 0.0, max_lon = 0.0;

    bool valid() const { return min_lat < max_lat && min_lon < max_lon; }
    // Closed on all edges.
    bool contains(double lat, double lon) const {
        return lat >= min_lat && lat <= max_lat && lon >= min_lon && lon <= max_lon;
    }
};

// Half-open observation interval [start, start + duration).
struct AnalysisWindow {
    double start = 0.0;      // absolute seconds
    double duration = 0.0;   // seconds, > 0

    double t_max_hours() const { return duration / 3600.0; }
    bool contains(double t) const { return t >= start && t < start + duration; }
};

// One person's events inside one window, as hour offsets from the window
// start, sorted ascending, each in [0, t_max). May be empty: a quiet
// individual still belongs to the population.
struct IndividualLog {
    std::string individual_id;
    std::string cohort;
    std::vector<double> offsets; // hours

    std::int64_t events() const { return static_cast<std::int64_t>(offsets.size()); }
};

struct IngestSummary {
    std::map<std::string, std::int64_t> skipped_ids; // unknown id -> event count
    std::int64_t events_seen = 0;
    std::int64_t events_in_window = 0;
    std::int64_t events_wrong_kind = 0;
};

// Windows an event stream into per-individual logs. Every id in cohort_map
// yields a log (possibly empty); events from unknown ids are collected into
// summary->skipped_ids rather than failing the run. A non-empty kind_filter
// keeps only events of that kind. Logs are returned sorted by id.
std::vector<IndividualLog> ingest_events(std::span<const EventRecord> events,
                                         const AnalysisWindow& window,
                                         const std::map<std::string, std::string>& cohort_map,
                                         IngestSummary* summary = nullptr,
                                         const std::string& kind_filter = {});

// Center of the most-visited cell of a fixed lat/lon grid. Ties go to the
// cell visited earliest, then to the lexicographically smaller (lat, lon).
std::pair<double, double> home_location(std::span<const GpsRecord> gps, double grid_step_deg);

// Ids whose home lies inside the closed box, sorted.
std::vector<std::string> select_cohort(
    const std::map<std::string, std::pair<double, double>>& homes, const GeoBoundingBox& box);

// The attack-day window plus W background windows at the same weekday and
// time-of-day phase, with per-individual logs for each.
struct StudyDataset {
    AnalysisWindow attack_window;
    std::vector<AnalysisWindow> background_windows; // index k-1 starts k weeks before

    std::vector<std::string> ids;    // sorted, one entry per individual
    std::vector<std::string> cohort; // parallel to ids

    // window_logs[0] = attack day; window_logs[k] = background week k (k = 1..W).
    // Inner vectors are parallel to ids.
    std::vector<std::vector<IndividualLog>> window_logs;

    int weeks() const { return static_cast<int>(background_windows.size()); }
    std::span<const IndividualLog> day_logs() const { return window_logs.front(); }
    std::map<std::string, std::int64_t> cohort_sizes() const;
    std::int64_t events_in_window(std::size_t w) const;
};

// Slices raw events into the attack window and the W preceding weekly
// windows. Background week k starts exactly k * 7 days before the attack
// window. A background window that catches no events at all means the raw
// data does not span that far back; that week is reported by name.
StudyDataset slice_background(std::span<const EventRecord> events,
                              const AnalysisWindow& attack_window, int weeks,
                              const std::map<std::string, std::string>& cohort_map,
                              IngestSummary* summary = nullptr,
                              const std::string& kind_filter = {});

// The two cohort labels present in a set of logs, lexicographically ordered.
// Throws DegenerateError unless exactly two distinct labels occur.
std::pair<std::string, std::string> two_labels(std::span<const IndividualLog> logs);

} // namespace cohortdiff
