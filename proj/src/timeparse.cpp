#include "cohortdiff/timeparse.hpp"

#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "cohortdiff/errors.hpp"

namespace cohortdiff {

namespace {

bool all_numeric(const std::string& s) {
    if (s.empty()) return false;
    char* end = nullptr;
    std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size();
}

std::int64_t days_since_epoch(int y, int m, int d) {
    using namespace std::chrono;
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(m)},
                             day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) throw InputError("invalid calendar date in time literal");
    return sys_days{ymd}.time_since_epoch().count();
}

} // namespace

double parse_time_point(const std::string& text) {
    std::string s = text;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    if (s.empty()) throw InputError("empty time literal");

    if (all_numeric(s)) return std::strtod(s.c_str(), nullptr);

    int y = 0, mo = 0, d = 0, h = 0, mi = 0;
    double sec = 0.0;
    int consumed = 0;
    if (std::sscanf(s.c_str(), "%d-%d-%d%n", &y, &mo, &d, &consumed) != 3)
        throw InputError("unparseable time literal: '" + text + "'");

    std::string rest = s.substr(consumed);
    if (!rest.empty()) {
        if (rest.front() == 'T' || rest.front() == ' ') rest.erase(rest.begin());
        int hm_consumed = 0;
        if (std::sscanf(rest.c_str(), "%d:%d%n", &h, &mi, &hm_consumed) != 2)
            throw InputError("unparseable time-of-day in '" + text + "'");
        rest = rest.substr(hm_consumed);
        if (!rest.empty() && rest.front() == ':') {
            char* end = nullptr;
            sec = std::strtod(rest.c_str() + 1, &end);
            rest = std::string(end);
        }
    }

    double zone_shift = 0.0;
    if (!rest.empty()) {
        if (rest == "Z") {
            rest.clear();
        } else if (rest.front() == '+' || rest.front() == '-') {
            int zh = 0, zm = 0;
            const int sign = rest.front() == '-' ? -1 : 1;
            const int n = std::sscanf(rest.c_str() + 1, "%d:%d", &zh, &zm);
            if (n < 1) throw InputError("unparseable zone offset in '" + text + "'");
            zone_shift = -sign * (zh * 3600.0 + zm * 60.0);
            rest.clear();
        } else {
            throw InputError("trailing junk in time literal '" + text + "'");
        }
    }
    if (h < 0 || h > 23 || mi < 0 || mi > 59 || sec < 0.0 || sec >= 61.0)
        throw InputError("time-of-day out of range in '" + text + "'");

    return static_cast<double>(days_since_epoch(y, mo, d)) * 86400.0 + h * 3600.0 +
           mi * 60.0 + sec + zone_shift;
}

std::string format_utc(double epoch_seconds) {
    const double whole = std::floor(epoch_seconds);
    std::int64_t t = static_cast<std::int64_t>(whole);
    std::int64_t days = t / 86400;
    std::int64_t rem = t % 86400;
    if (rem < 0) {
        rem += 86400;
        --days;
    }
    using namespace std::chrono;
    const year_month_day ymd{sys_days{std::chrono::days{days}}};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u %02lld:%02lld:%02lld",
                  static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                  static_cast<unsigned>(ymd.day()), static_cast<long long>(rem / 3600),
                  static_cast<long long>(rem / 60 % 60), static_cast<long long>(rem % 60));
    return buf;
}

std::string weekday_name(double epoch_seconds) {
    static const char* names[] = {"Sunday",   "Monday", "Tuesday", "Wednesday",
                                  "Thursday", "Friday", "Saturday"};
    std::int64_t t = static_cast<std::int64_t>(std::floor(epoch_seconds));
    std::int64_t days = t / 86400;
    if (t % 86400 < 0) --days;
    std::int64_t idx = (days + 4) % 7; // 1970-01-01 was a Thursday
    if (idx < 0) idx += 7;
    return names[idx];
}

} // namespace cohortdiff
