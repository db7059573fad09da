#pragma once
// Injectable clocks. Timestamps are milliseconds since the Unix epoch;
// the logical clock hands out strictly increasing values so temporal
// assertions stay deterministic in tests.

#include <chrono>
#include <cstdint>
#include <memory>
#include <string>

namespace cogmem {

struct Timestamp {
    std::int64_t ms = 0;

    friend bool operator==(Timestamp a, Timestamp b) { return a.ms == b.ms; }
    friend bool operator!=(Timestamp a, Timestamp b) { return a.ms != b.ms; }
    friend bool operator<(Timestamp a, Timestamp b) { return a.ms < b.ms; }
    friend bool operator<=(Timestamp a, Timestamp b) { return a.ms <= b.ms; }
    friend bool operator>(Timestamp a, Timestamp b) { return a.ms > b.ms; }
    friend bool operator>=(Timestamp a, Timestamp b) { return a.ms >= b.ms; }
};

// Render as ISO-8601 UTC with minute precision, e.g. 2026-02-04T03:00Z.
std::string to_iso_minutes(Timestamp t);
// Full precision variant used in JSON exports.
std::string to_iso_millis(Timestamp t);

class Clock {
public:
    virtual ~Clock() = default;
    virtual Timestamp now() = 0;
};

class SystemClock final : public Clock {
public:
    Timestamp now() override {
        using namespace std::chrono;
        return {duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count()};
    }
};

// Starts at `base` and advances one millisecond per call.
class LogicalClock final : public Clock {
public:
    explicit LogicalClock(std::int64_t base = 0) : next_(base) {}

    Timestamp now() override { return {next_++}; }
    Timestamp peek() const { return {next_}; }
    void advance(std::int64_t ms) { next_ += ms; }

private:
    std::int64_t next_;
};

} // namespace cogmem
