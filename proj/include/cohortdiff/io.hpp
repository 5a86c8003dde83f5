#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "cohortdiff/event_model.hpp"

namespace cohortdiff {

// Event and GPS inputs are CSV (header row required) or JSON-lines, chosen
// by extension (.jsonl/.ndjson vs anything else). Timestamps may be epoch
// seconds or ISO-8601. Malformed records fail with file:line context.
std::vector<EventRecord> read_events(const std::string& path);
std::vector<GpsRecord> read_gps(const std::string& path);

// CSV "id,label".
std::map<std::string, std::string> read_cohort_map(const std::string& path);

// City bounding boxes, keyed by lower-case city name. The built-in table
// covers the cities shipped with the tool; a JSON file of the same shape
// replaces or extends it.
std::map<std::string, GeoBoundingBox> default_city_boxes();
std::map<std::string, GeoBoundingBox> read_city_boxes(const std::string& path);

// Sliced-dataset archive (JSON). Offsets are stored in hours, exactly as
// analyzed; the reader revalidates ordering and range.
void write_dataset_archive(const StudyDataset& ds, const nlohmann::json& summary,
                           const std::string& path);
StudyDataset read_dataset_archive(const std::string& path);

// Flattens a dataset back into absolute-timestamp event records (id-major,
// window-major, time-ascending), the inverse of slicing. Used by the
// synthetic generator so its output exercises the normal ingestion path.
std::vector<EventRecord> dataset_to_events(const StudyDataset& ds, const std::string& kind);

void write_events_csv(std::span<const EventRecord> events, const std::string& path);
void write_cohorts_csv(const std::map<std::string, std::string>& cohorts,
                       const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

} // namespace cohortdiff
