#pragma once

#include <string>

namespace cohortdiff {

// Parses an absolute time given either as epoch seconds ("1447459080",
// "1447459080.5") or as ISO-8601 ("2015-11-14 00:58", "2015-11-14T00:58:00.25",
// optional trailing "Z" or "+HH:MM" offset). Naive stamps are taken in the
// dataset's declared zone; no zone inference happens here. Throws InputError.
double parse_time_point(const std::string& text);

// "YYYY-MM-DD HH:MM:SS" for an epoch-second value (fractional part dropped).
std::string format_utc(double epoch_seconds);

// "Monday" .. "Sunday".
std::string weekday_name(double epoch_seconds);

} // namespace cohortdiff
