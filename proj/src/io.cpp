#include "cohortdiff/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cohortdiff/errors.hpp"
#include "cohortdiff/timeparse.hpp"

namespace cohortdiff {

namespace {

bool has_suffix(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

bool is_jsonl(const std::string& path) {
    return has_suffix(path, ".jsonl") || has_suffix(path, ".ndjson");
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

[[noreturn]] void fail_at(const std::string& path, std::size_t line, const std::string& msg) {
    throw InputError(path + ":" + std::to_string(line) + ": " + msg);
}

struct CsvReader {
    std::ifstream in;
    std::string path;
    std::size_t line_no = 0;
    std::map<std::string, std::size_t> columns;

    CsvReader(const std::string& p, const std::vector<std::string>& required) : path(p) {
        in.open(p);
        if (!in) throw InputError("cannot open '" + p + "'");
        std::string header;
        if (!std::getline(in, header)) throw InputError(p + ": empty file");
        ++line_no;
        const auto names = split_csv_line(header);
        for (std::size_t i = 0; i < names.size(); ++i) columns[names[i]] = i;
        for (const std::string& r : required)
            if (!columns.count(r)) throw InputError(p + ": missing required column '" + r + "'");
    }

    bool next(std::vector<std::string>& fields) {
        std::string line;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty() || line == "\r") continue;
            fields = split_csv_line(line);
            return true;
        }
        return false;
    }

    const std::string& field(const std::vector<std::string>& fields, const std::string& name) {
        const std::size_t i = columns.at(name);
        if (i >= fields.size()) fail_at(path, line_no, "missing field '" + name + "'");
        return fields[i];
    }
};

double parse_timestamp_field(const std::string& path, std::size_t line, const std::string& text) {
    try {
        return parse_time_point(text);
    } catch (const InputError& e) {
        fail_at(path, line, e.what());
    }
}

double parse_double_field(const std::string& path, std::size_t line, const std::string& text,
                          const char* what) {
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size() || text.empty() || !std::isfinite(v))
        fail_at(path, line, std::string("bad ") + what + " '" + text + "'");
    return v;
}

nlohmann::json parse_jsonl_record(const std::string& path, std::size_t line,
                                  const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object()) fail_at(path, line, "not a JSON object");
    return j;
}

double timestamp_from_json(const std::string& path, std::size_t line, const nlohmann::json& j) {
    if (!j.contains("timestamp")) fail_at(path, line, "missing 'timestamp'");
    if (j["timestamp"].is_number()) return j["timestamp"].get<double>();
    if (j["timestamp"].is_string())
        return parse_timestamp_field(path, line, j["timestamp"].get<std::string>());
    fail_at(path, line, "'timestamp' must be a number or string");
}

} // namespace

std::vector<EventRecord> read_events(const std::string& path) {
    std::vector<EventRecord> events;
    if (is_jsonl(path)) {
        std::ifstream in(path);
        if (!in) throw InputError("cannot open '" + path + "'");
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            const nlohmann::json j = parse_jsonl_record(path, line_no, line);
            if (!j.contains("id") || !j["id"].is_string()) fail_at(path, line_no, "missing 'id'");
            EventRecord ev;
            ev.individual_id = j["id"].get<std::string>();
            ev.timestamp = timestamp_from_json(path, line_no, j);
            ev.kind = j.value("kind", std::string{});
            events.push_back(std::move(ev));
        }
        return events;
    }
    CsvReader csv(path, {"id", "timestamp"});
    const bool has_kind = csv.columns.count("kind") > 0;
    std::vector<std::string> fields;
    while (csv.next(fields)) {
        EventRecord ev;
        ev.individual_id = csv.field(fields, "id");
        if (ev.individual_id.empty()) fail_at(path, csv.line_no, "empty id");
        ev.timestamp = parse_timestamp_field(path, csv.line_no, csv.field(fields, "timestamp"));
        if (has_kind) ev.kind = csv.field(fields, "kind");
        events.push_back(std::move(ev));
    }
    return events;
}

std::vector<GpsRecord> read_gps(const std::string& path) {
    std::vector<GpsRecord> records;
    if (is_jsonl(path)) {
        std::ifstream in(path);
        if (!in) throw InputError("cannot open '" + path + "'");
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            const nlohmann::json j = parse_jsonl_record(path, line_no, line);
            if (!j.contains("id") || !j.contains("lat") || !j.contains("lon"))
                fail_at(path, line_no, "gps records need id, lat, lon");
            GpsRecord r;
            r.individual_id = j["id"].get<std::string>();
            r.timestamp = timestamp_from_json(path, line_no, j);
            r.lat = j["lat"].get<double>();
            r.lon = j["lon"].get<double>();
            records.push_back(std::move(r));
        }
        return records;
    }
    CsvReader csv(path, {"id", "timestamp", "lat", "lon"});
    std::vector<std::string> fields;
    while (csv.next(fields)) {
        GpsRecord r;
        r.individual_id = csv.field(fields, "id");
        if (r.individual_id.empty()) fail_at(path, csv.line_no, "empty id");
        r.timestamp = parse_timestamp_field(path, csv.line_no, csv.field(fields, "timestamp"));
        r.lat = parse_double_field(path, csv.line_no, csv.field(fields, "lat"), "latitude");
        r.lon = parse_double_field(path, csv.line_no, csv.field(fields, "lon"), "longitude");
        records.push_back(std::move(r));
    }
    return records;
}

std::map<std::string, std::string> read_cohort_map(const std::string& path) {
    CsvReader csv(path, {"id", "label"});
    std::map<std::string, std::string> cohorts;
    std::vector<std::string> fields;
    while (csv.next(fields)) {
        const std::string& id = csv.field(fields, "id");
        const std::string& label = csv.field(fields, "label");
        if (id.empty()) fail_at(path, csv.line_no, "empty id");
        if (label.empty()) fail_at(path, csv.line_no, "empty label for id '" + id + "'");
        const auto [it, inserted] = cohorts.emplace(id, label);
        if (!inserted && it->second != label)
            fail_at(path, csv.line_no, "conflicting label for id '" + id + "'");
    }
    if (cohorts.empty()) throw InputError(path + ": no cohort assignments");
    return cohorts;
}

std::map<std::string, GeoBoundingBox> default_city_boxes() {
    return {
        {"berlin", {52.369276, 52.650018, 13.091432, 13.754525}},
        {"nice", {43.646275, 43.758400, 7.178630, 7.338724}},
        {"barcelona", {41.310933, 41.465339, 2.058793, 2.244023}},
        {"london", {51.325628, 51.672014, -0.472381, 0.268712}},
        {"stockholm", {59.298186, 59.371545, 17.945337, 18.154841}},
        {"copenhagen", {55.5531, 55.8175, 12.2607, 12.7043}},
        {"paris", {48.7106, 48.9991, 2.0641, 2.6463}},
    };
}

std::map<std::string, GeoBoundingBox> read_city_boxes(const std::string& path) {
    nlohmann::json j = nlohmann::json::parse(read_text_file(path), nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw InputError(path + ": not a JSON object");
    std::map<std::string, GeoBoundingBox> boxes = default_city_boxes();
    for (const auto& [city, box] : j.items()) {
        for (const char* key : {"min_lat", "max_lat", "min_lon", "max_lon"})
            if (!box.contains(key) || !box[key].is_number())
                throw InputError(path + ": box '" + city + "' needs numeric " + key);
        GeoBoundingBox b{box["min_lat"].get<double>(), box["max_lat"].get<double>(),
                         box["min_lon"].get<double>(), box["max_lon"].get<double>()};
        if (!b.valid()) throw InputError(path + ": box '" + city + "' has min >= max");
        boxes[city] = b;
    }
    return boxes;
}

void write_dataset_archive(const StudyDataset& ds, const nlohmann::json& summary,
                           const std::string& path) {
    nlohmann::json j;
    j["format"] = "cohortdiff-dataset";
    j["version"] = 1;
    j["t_max_hours"] = ds.attack_window.t_max_hours();
    j["attack_window"] = {{"start", ds.attack_window.start},
                          {"duration_s", ds.attack_window.duration}};
    j["background_windows"] = nlohmann::json::array();
    for (const AnalysisWindow& w : ds.background_windows)
        j["background_windows"].push_back({{"start", w.start}, {"duration_s", w.duration}});
    j["individuals"] = nlohmann::json::array();
    for (std::size_t i = 0; i < ds.ids.size(); ++i) {
        nlohmann::json person;
        person["id"] = ds.ids[i];
        person["cohort"] = ds.cohort[i];
        nlohmann::json offsets = nlohmann::json::array();
        for (const auto& wl : ds.window_logs) offsets.push_back(wl[i].offsets);
        person["offsets"] = std::move(offsets);
        j["individuals"].push_back(std::move(person));
    }
    if (!summary.is_null()) j["summary"] = summary;
    write_text_file(path, j.dump(2) + "\n");
}

StudyDataset read_dataset_archive(const std::string& path) {
    nlohmann::json j = nlohmann::json::parse(read_text_file(path), nullptr, false);
    if (j.is_discarded()) throw InputError(path + ": not valid JSON");
    if (j.value("format", std::string{}) != "cohortdiff-dataset")
        throw InputError(path + ": not a cohortdiff dataset archive");
    if (j.value("version", 0) != 1) throw InputError(path + ": unsupported archive version");

    StudyDataset ds;
    ds.attack_window = AnalysisWindow{j["attack_window"]["start"].get<double>(),
                                      j["attack_window"]["duration_s"].get<double>()};
    if (ds.attack_window.duration <= 0.0) throw InputError(path + ": non-positive window duration");
    for (const auto& w : j["background_windows"]) {
        ds.background_windows.push_back(
            AnalysisWindow{w["start"].get<double>(), w["duration_s"].get<double>()});
        if (ds.background_windows.back().duration != ds.attack_window.duration)
            throw InputError(path + ": background window duration differs from the attack window");
    }

    const std::size_t n_windows = ds.background_windows.size() + 1;
    const double t_max = ds.attack_window.t_max_hours();
    ds.window_logs.assign(n_windows, {});

    for (const auto& person : j["individuals"]) {
        const auto id = person["id"].get<std::string>();
        const auto label = person["cohort"].get<std::string>();
        const auto& offsets = person["offsets"];
        if (offsets.size() != n_windows)
            throw InputError(path + ": individual '" + id + "' has " +
                             std::to_string(offsets.size()) + " windows, expected " +
                             std::to_string(n_windows));
        ds.ids.push_back(id);
        ds.cohort.push_back(label);
        for (std::size_t w = 0; w < n_windows; ++w) {
            auto offs = offsets[w].get<std::vector<double>>();
            if (!std::is_sorted(offs.begin(), offs.end()))
                throw InputError(path + ": offsets for '" + id + "' are not sorted");
            if (!offs.empty() && (offs.front() < 0.0 || offs.back() >= t_max))
                throw InputError(path + ": offsets for '" + id + "' outside [0, t_max)");
            ds.window_logs[w].push_back(IndividualLog{id, label, std::move(offs)});
        }
    }
    if (ds.ids.empty()) throw InputError(path + ": archive holds no individuals");
    if (!std::is_sorted(ds.ids.begin(), ds.ids.end()))
        throw InputError(path + ": individuals are not sorted by id");
    return ds;
}

std::vector<EventRecord> dataset_to_events(const StudyDataset& ds, const std::string& kind) {
    // Windows ordered oldest-first so output files read chronologically.
    std::vector<std::size_t> window_order;
    for (std::size_t w = ds.window_logs.size(); w >= 2; --w) window_order.push_back(w - 1);
    window_order.push_back(0);

    std::vector<EventRecord> events;
    for (std::size_t i = 0; i < ds.ids.size(); ++i) {
        for (std::size_t w : window_order) {
            const AnalysisWindow& win =
                w == 0 ? ds.attack_window : ds.background_windows[w - 1];
            for (double off : ds.window_logs[w][i].offsets)
                events.push_back(EventRecord{ds.ids[i], win.start + off * 3600.0, kind});
        }
    }
    return events;
}

void write_events_csv(std::span<const EventRecord> events, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << "id,timestamp,kind\n";
    char buf[64];
    for (const EventRecord& ev : events) {
        std::snprintf(buf, sizeof buf, "%.6f", ev.timestamp);
        out << ev.individual_id << ',' << buf << ',' << ev.kind << '\n';
    }
}

void write_cohorts_csv(const std::map<std::string, std::string>& cohorts,
                       const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << "id,label\n";
    for (const auto& [id, label] : cohorts) out << id << ',' << label << '\n';
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << content;
    if (!out) throw InputError("failed writing '" + path + "'");
}

} // namespace cohortdiff
