#include "cogmem/clock.hpp"

#include <cstdio>
#include <ctime>

namespace cogmem {

namespace {

std::tm to_utc(Timestamp t) {
    std::time_t secs = static_cast<std::time_t>(t.ms / 1000);
    std::tm out{};
    gmtime_r(&secs, &out);
    return out;
}

} // namespace

std::string to_iso_minutes(Timestamp t) {
    std::tm tm = to_utc(t);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02dZ", tm.tm_year + 1900,
                  tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min);
    return buf;
}

std::string to_iso_millis(Timestamp t) {
    std::tm tm = to_utc(t);
    char buf[80];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900,
                  tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec,
                  static_cast<int>(((t.ms % 1000) + 1000) % 1000));
    return buf;
}

} // namespace cogmem
