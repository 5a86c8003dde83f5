#include "cohortdiff/event_model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "cohortdiff/errors.hpp"
#include "cohortdiff/timeparse.hpp"

namespace cohortdiff {

std::vector<IndividualLog> ingest_events(std::span<const EventRecord> events,
                                         const AnalysisWindow& window,
                                         const std::map<std::string, std::string>& cohort_map,
                                         IngestSummary* summary,
                                         const std::string& kind_filter) {
    if (window.duration <= 0.0) throw InputError("analysis window duration must be positive");

    std::map<std::string, std::vector<double>> offsets;
    for (const auto& [id, label] : cohort_map) {
        (void)label;
        offsets.emplace(id, std::vector<double>{});
    }

    for (const EventRecord& ev : events) {
        if (summary) ++summary->events_seen;
        if (!std::isfinite(ev.timestamp))
            throw InputError("non-finite timestamp for id '" + ev.individual_id + "'");
        if (ev.individual_id.empty()) throw InputError("event with empty individual id");
        if (!kind_filter.empty() && ev.kind != kind_filter) {
            if (summary) ++summary->events_wrong_kind;
            continue;
        }
        if (!window.contains(ev.timestamp)) continue;
        auto it = offsets.find(ev.individual_id);
        if (it == offsets.end()) {
            if (summary) ++summary->skipped_ids[ev.individual_id];
            continue;
        }
        it->second.push_back((ev.timestamp - window.start) / 3600.0);
        if (summary) ++summary->events_in_window;
    }

    std::vector<IndividualLog> logs;
    logs.reserve(offsets.size());
    for (auto& [id, offs] : offsets) {
        std::sort(offs.begin(), offs.end());
        logs.push_back(IndividualLog{id, cohort_map.at(id), std::move(offs)});
    }
    return logs;
}

std::pair<double, double> home_location(std::span<const GpsRecord> gps, double grid_step_deg) {
    if (gps.empty()) throw InputError("no location data");
    if (grid_step_deg <= 0.0) throw InputError("grid step must be positive");

    struct Cell {
        std::int64_t count = 0;
        double first_visit = 0.0;
    };
    std::map<std::pair<std::int64_t, std::int64_t>, Cell> cells;
    for (const GpsRecord& r : gps) {
        if (r.lat < -90.0 || r.lat > 90.0 || r.lon < -180.0 || r.lon > 180.0)
            throw InputError("GPS coordinates out of range for id '" + r.individual_id + "'");
        const auto key = std::make_pair(
            static_cast<std::int64_t>(std::floor(r.lat / grid_step_deg)),
            static_cast<std::int64_t>(std::floor(r.lon / grid_step_deg)));
        auto [it, inserted] = cells.try_emplace(key);
        Cell& c = it->second;
        if (inserted || r.timestamp < c.first_visit) c.first_visit = r.timestamp;
        ++c.count;
    }

    auto best = cells.begin();
    for (auto it = std::next(cells.begin()); it != cells.end(); ++it) {
        const bool wins = it->second.count > best->second.count ||
                          (it->second.count == best->second.count &&
                           it->second.first_visit < best->second.first_visit);
        // Map order already favors the lexicographically smaller cell on full ties.
        if (wins) best = it;
    }
    return {(static_cast<double>(best->first.first) + 0.5) * grid_step_deg,
            (static_cast<double>(best->first.second) + 0.5) * grid_step_deg};
}

std::vector<std::string> select_cohort(
    const std::map<std::string, std::pair<double, double>>& homes, const GeoBoundingBox& box) {
    if (!box.valid()) throw InputError("invalid bounding box (min must be < max)");
    std::vector<std::string> ids;
    for (const auto& [id, home] : homes)
        if (box.contains(home.first, home.second)) ids.push_back(id);
    return ids;
}

std::map<std::string, std::int64_t> StudyDataset::cohort_sizes() const {
    std::map<std::string, std::int64_t> sizes;
    for (const std::string& label : cohort) ++sizes[label];
    return sizes;
}

std::int64_t StudyDataset::events_in_window(std::size_t w) const {
    std::int64_t n = 0;
    for (const IndividualLog& log : window_logs.at(w)) n += log.events();
    return n;
}

StudyDataset slice_background(std::span<const EventRecord> events,
                              const AnalysisWindow& attack_window, int weeks,
                              const std::map<std::string, std::string>& cohort_map,
                              IngestSummary* summary, const std::string& kind_filter) {
    if (weeks < 1) throw InputError("background week count must be >= 1");
    if (attack_window.duration <= 0.0) throw InputError("analysis window duration must be positive");
    if (cohort_map.empty()) throw InputError("empty cohort map");

    constexpr double kWeek = 7.0 * 86400.0;

    StudyDataset ds;
    ds.attack_window = attack_window;
    for (int k = 1; k <= weeks; ++k)
        ds.background_windows.push_back(
            AnalysisWindow{attack_window.start - k * kWeek, attack_window.duration});

    for (const auto& [id, label] : cohort_map) {
        ds.ids.push_back(id);
        ds.cohort.push_back(label);
    }

    ds.window_logs.push_back(ingest_events(events, attack_window, cohort_map, summary, kind_filter));
    for (int k = 1; k <= weeks; ++k) {
        // Unknown-id and kind tallies are per run, not per window; only the
        // first slice feeds the summary counters.
        ds.window_logs.push_back(
            ingest_events(events, ds.background_windows[k - 1], cohort_map, nullptr, kind_filter));
    }

    for (int k = weeks; k >= 1; --k) {
        if (ds.events_in_window(k) == 0) {
            const AnalysisWindow& w = ds.background_windows[k - 1];
            throw InputError("no events in background week " + std::to_string(k) + " starting " +
                             format_utc(w.start) + " (" + weekday_name(w.start) +
                             "); raw data does not span " + std::to_string(weeks) + " weeks");
        }
    }
    return ds;
}

std::pair<std::string, std::string> two_labels(std::span<const IndividualLog> logs) {
    std::set<std::string> labels;
    for (const IndividualLog& log : logs) labels.insert(log.cohort);
    if (labels.size() != 2)
        throw DegenerateError("expected exactly 2 cohort labels, found " +
                              std::to_string(labels.size()));
    auto it = labels.begin();
    const std::string a = *it++;
    return {a, *it};
}

} // namespace cohortdiff
