#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "cohortdiff/errors.hpp"
#include "cohortdiff/event_model.hpp"
#include "cohortdiff/rng.hpp"
#include "cohortdiff/timeparse.hpp"

using namespace cohortdiff;

namespace {

EventRecord ev(const std::string& id, double ts) { return EventRecord{id, ts, "communication"}; }

const IndividualLog& log_of(const std::vector<IndividualLog>& logs, const std::string& id) {
    const auto it = std::find_if(logs.begin(), logs.end(),
                                 [&](const IndividualLog& l) { return l.individual_id == id; });
    REQUIRE(it != logs.end());
    return *it;
}

} // namespace

TEST_CASE("ingest windows events into hour offsets") {
    const AnalysisWindow window{1000.0, 86400.0};
    const std::map<std::string, std::string> cohorts{{"u1", "A"}};
    const std::vector<EventRecord> events{ev("u1", 1000.0 + 3600.0), ev("u1", 1000.0 + 7200.0)};
    const auto logs = ingest_events(events, window, cohorts);
    REQUIRE(logs.size() == 1);
    CHECK(logs[0].offsets == std::vector<double>{1.0, 2.0});
}

TEST_CASE("window is half-open: event at start+duration excluded, at start included") {
    const AnalysisWindow window{0.0, 86400.0};
    const std::map<std::string, std::string> cohorts{{"u1", "A"}};
    const std::vector<EventRecord> events{ev("u1", 0.0), ev("u1", 86400.0)};
    const auto logs = ingest_events(events, window, cohorts);
    CHECK(logs[0].offsets == std::vector<double>{0.0});
}

TEST_CASE("individuals with no in-window events keep an empty log") {
    const AnalysisWindow window{0.0, 86400.0};
    const std::map<std::string, std::string> cohorts{{"a", "A"}, {"b", "B"}, {"c", "A"}};
    const std::vector<EventRecord> events{ev("a", 10.0), ev("b", 20.0), ev("c", 1e7)};
    const auto logs = ingest_events(events, window, cohorts);
    REQUIRE(logs.size() == 3);
    CHECK(log_of(logs, "c").offsets.empty());
    CHECK(log_of(logs, "a").events() == 1);
}

TEST_CASE("unknown ids are reported, not fatal; counts are conserved") {
    const AnalysisWindow window{0.0, 86400.0};
    const std::map<std::string, std::string> cohorts{{"a", "A"}, {"b", "B"}};
    std::vector<EventRecord> events;
    SplitMix64 rng(7);
    std::int64_t known_in_window = 0;
    for (int i = 0; i < 500; ++i) {
        const char* id = i % 3 == 0 ? "ghost" : (i % 3 == 1 ? "a" : "b");
        const double ts = rng.uniform01() * 2.0 * 86400.0 - 3600.0;
        events.push_back(ev(id, ts));
        if (i % 3 != 0 && window.contains(ts)) ++known_in_window;
    }
    IngestSummary summary;
    const auto logs = ingest_events(events, window, cohorts, &summary);
    std::int64_t total = 0;
    for (const auto& l : logs) total += l.events();
    CHECK(total == known_in_window);
    CHECK(summary.skipped_ids.count("ghost") == 1);
    CHECK(summary.skipped_ids.at("ghost") > 0);
}

TEST_CASE("ingest offsets are sorted regardless of input order") {
    const AnalysisWindow window{0.0, 86400.0};
    const std::map<std::string, std::string> cohorts{{"u", "A"}};
    const std::vector<EventRecord> events{ev("u", 7200.0), ev("u", 3600.0), ev("u", 5400.0)};
    const auto logs = ingest_events(events, window, cohorts);
    CHECK(std::is_sorted(logs[0].offsets.begin(), logs[0].offsets.end()));
}

TEST_CASE("windowing is idempotent") {
    const AnalysisWindow window{5000.0, 86400.0};
    const std::map<std::string, std::string> cohorts{{"u", "A"}};
    std::vector<EventRecord> events;
    SplitMix64 rng(11);
    for (int i = 0; i < 100; ++i) events.push_back(ev("u", 5000.0 + rng.uniform01() * 86400.0));
    const auto first = ingest_events(events, window, cohorts);

    std::vector<EventRecord> rebuilt;
    for (double off : first[0].offsets) rebuilt.push_back(ev("u", window.start + off * 3600.0));
    const auto second = ingest_events(rebuilt, window, cohorts);
    CHECK(second[0].offsets == first[0].offsets);
}

TEST_CASE("home location: unanimity, majority, tie-break") {
    auto rec = [](double ts, double lat, double lon) { return GpsRecord{"u", ts, lat, lon}; };

    SUBCASE("all records in one cell") {
        std::vector<GpsRecord> gps;
        for (int i = 0; i < 10; ++i) gps.push_back(rec(i, 52.523 + i * 1e-4, 13.402));
        const auto [lat, lon] = home_location(gps, 0.01);
        CHECK(lat == doctest::Approx(52.525));
        CHECK(lon == doctest::Approx(13.405));
    }
    SUBCASE("majority cell wins") {
        std::vector<GpsRecord> gps;
        for (int i = 0; i < 6; ++i) gps.push_back(rec(i, 10.001, 20.001));
        for (int i = 0; i < 4; ++i) gps.push_back(rec(100 + i, 30.001, 40.001));
        const auto [lat, lon] = home_location(gps, 0.01);
        CHECK(lat == doctest::Approx(10.005));
        CHECK(lon == doctest::Approx(20.005));
    }
    SUBCASE("count tie goes to the cell visited first") {
        std::vector<GpsRecord> gps;
        for (int i = 0; i < 5; ++i) gps.push_back(rec(50 + i, 30.001, 40.001)); // Q later
        for (int i = 0; i < 5; ++i) gps.push_back(rec(i, 10.001, 20.001));      // P first
        const auto [lat, lon] = home_location(gps, 0.01);
        CHECK(lat == doctest::Approx(10.005));
        CHECK(lon == doctest::Approx(20.005));
    }
    SUBCASE("empty input is an error") {
        CHECK_THROWS_AS(home_location({}, 0.01), InputError);
    }
}

TEST_CASE("home location ignores record order except through first-visit time") {
    SplitMix64 rng(3);
    std::vector<GpsRecord> gps;
    for (int i = 0; i < 60; ++i)
        gps.push_back(GpsRecord{"u", static_cast<double>(i),
                                45.0 + rng.uniform01() * 0.1, 7.0 + rng.uniform01() * 0.1});
    const auto base = home_location(gps, 0.01);
    for (int trial = 0; trial < 10; ++trial) {
        for (std::size_t j = gps.size(); j > 1; --j)
            std::swap(gps[j - 1], gps[rng.below(j)]);
        const auto shuffled = home_location(gps, 0.01);
        CHECK(shuffled == base);
    }
}

TEST_CASE("cohort selection by bounding box") {
    const GeoBoundingBox berlin{52.369276, 52.650018, 13.091432, 13.754525};
    std::map<std::string, std::pair<double, double>> homes{
        {"inside", {52.52, 13.40}},
        {"edge", {52.369276, 13.40}},
        {"paris", {48.85, 2.35}},
    };
    const auto ids = select_cohort(homes, berlin);
    CHECK(ids == std::vector<std::string>{"edge", "inside"});
}

TEST_CASE("enlarging a box never removes an id") {
    SplitMix64 rng(21);
    std::map<std::string, std::pair<double, double>> homes;
    for (int i = 0; i < 200; ++i)
        homes["id" + std::to_string(i)] = {rng.uniform01() * 80.0 - 40.0,
                                           rng.uniform01() * 160.0 - 80.0};
    for (int trial = 0; trial < 50; ++trial) {
        const double lat0 = rng.uniform01() * 60.0 - 30.0;
        const double lon0 = rng.uniform01() * 120.0 - 60.0;
        const GeoBoundingBox small{lat0, lat0 + 5.0 + rng.uniform01() * 10.0, lon0,
                                   lon0 + 5.0 + rng.uniform01() * 10.0};
        const GeoBoundingBox big{small.min_lat - rng.uniform01() * 5.0,
                                 small.max_lat + rng.uniform01() * 5.0,
                                 small.min_lon - rng.uniform01() * 5.0,
                                 small.max_lon + rng.uniform01() * 5.0};
        const auto inner = select_cohort(homes, small);
        const auto outer = select_cohort(homes, big);
        CHECK(std::includes(outer.begin(), outer.end(), inner.begin(), inner.end()));
    }
}

TEST_CASE("background windows sit exactly k weeks earlier at the same phase") {
    // Friday 00:58 anchor; two background weeks land on the two preceding Fridays.
    const double anchor = parse_time_point("2017-04-07 00:58:00");
    const AnalysisWindow attack{anchor, 86400.0};
    const std::map<std::string, std::string> cohorts{{"a", "A"}, {"b", "B"}};
    std::vector<EventRecord> events;
    for (int k = 0; k <= 2; ++k) {
        events.push_back(ev("a", anchor - k * 7 * 86400.0 + 100.0));
        events.push_back(ev("b", anchor - k * 7 * 86400.0 + 200.0));
    }
    const auto ds = slice_background(events, attack, 2, cohorts);
    REQUIRE(ds.weeks() == 2);
    for (int k = 1; k <= 2; ++k) {
        const AnalysisWindow& w = ds.background_windows[k - 1];
        CHECK(w.start == anchor - k * 7 * 86400.0);
        CHECK(weekday_name(w.start) == "Friday");
        CHECK(format_utc(w.start).substr(11) == "00:58:00");
    }
    CHECK(ds.events_in_window(0) == 2);
    CHECK(ds.events_in_window(1) == 2);
}

TEST_CASE("eight background weeks before a Saturday 00:58 anchor reach mid-September") {
    const double anchor = parse_time_point("2015-11-14 00:58:00");
    CHECK(weekday_name(anchor) == "Saturday");
    const AnalysisWindow attack{anchor, 86400.0};
    const std::map<std::string, std::string> cohorts{{"a", "A"}, {"b", "B"}};
    std::vector<EventRecord> events;
    for (int k = 0; k <= 8; ++k) {
        events.push_back(ev("a", anchor - k * 7 * 86400.0 + 60.0));
        events.push_back(ev("b", anchor - k * 7 * 86400.0 + 61.0));
    }
    const auto ds = slice_background(events, attack, 8, cohorts);
    const AnalysisWindow& earliest = ds.background_windows[7];
    // Week of Monday September 14, 2015.
    CHECK(format_utc(earliest.start).substr(0, 10) == "2015-09-19");
    CHECK(earliest.start >= parse_time_point("2015-09-14 00:00:00"));
    CHECK(earliest.start < parse_time_point("2015-09-21 00:00:00"));
}

TEST_CASE("degenerate background requests are rejected") {
    const AnalysisWindow attack{1e9, 86400.0};
    const std::map<std::string, std::string> cohorts{{"a", "A"}};
    const std::vector<EventRecord> events{ev("a", 1e9 + 5.0)};
    CHECK_THROWS_AS(slice_background(events, attack, 0, cohorts), InputError);

    // No events one week back: the missing week is named.
    try {
        slice_background(events, attack, 1, cohorts);
        FAIL("expected InputError");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find("week 1") != std::string::npos);
    }
}

TEST_CASE("time literals parse as epoch or ISO-8601") {
    CHECK(parse_time_point("86400") == 86400.0);
    CHECK(parse_time_point("86400.5") == 86400.5);
    CHECK(parse_time_point("1970-01-02 00:00:00") == 86400.0);
    CHECK(parse_time_point("1970-01-02T00:00") == 86400.0);
    CHECK(parse_time_point("1970-01-02T01:00+01:00") == 86400.0);
    CHECK(parse_time_point("2015-11-14 00:58:00") ==
          parse_time_point("2015-11-14T00:58:00Z"));
    CHECK_THROWS_AS(parse_time_point("not a time"), InputError);
    CHECK_THROWS_AS(parse_time_point("2015-13-40 00:00"), InputError);
}
