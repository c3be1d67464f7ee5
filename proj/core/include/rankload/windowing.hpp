#pragma once

#include <cstdint>
#include <vector>

#include "rankload/message.hpp"
#include "rankload/time.hpp"

namespace rankload {

// Half-open interval [start, end); half-openness prevents double counting at
// sub-window boundaries.
struct TimeWindow {
  Instant start = 0;
  Instant end = 0;

  std::int64_t seconds() const { return end - start; }
  bool contains(Instant t) const { return start <= t && t < end; }
  friend bool operator==(const TimeWindow&, const TimeWindow&) = default;
};

// Alerting period length (the t grid). Defaults across the project are
// {10, 20, 30, 40, 50, 60} minutes.
struct PeriodLength {
  std::int32_t minutes = 60;
  friend bool operator==(const PeriodLength&, const PeriodLength&) = default;
  friend auto operator<=>(const PeriodLength& a, const PeriodLength& b) {
    return a.minutes <=> b.minutes;
  }
};

enum class SchemeMode { periodic, realtime };

// Periodic: re-evaluate at the top of every hour over the past 24 h.
// Realtime: re-evaluate at the top of every minute over the past 60 min.
struct SchemeConfig {
  SchemeMode mode = SchemeMode::periodic;
  std::int64_t lookback_minutes = 24 * 60;
  std::int64_t cadence_minutes = 60;

  static SchemeConfig periodic() { return {SchemeMode::periodic, 24 * 60, 60}; }
  static SchemeConfig realtime() { return {SchemeMode::realtime, 60, 1}; }

  std::int64_t lookback_seconds() const { return lookback_minutes * kSecondsPerMinute; }
  // Instants align to whole hours (periodic) or whole minutes (realtime).
  std::int64_t alignment_seconds() const {
    return mode == SchemeMode::periodic ? kSecondsPerHour : kSecondsPerMinute;
  }

  void validate(std::int32_t max_period_minutes) const;  // throws InvalidArgument
};

// A window plus the stream messages inside it, by index range.
struct WindowSlice {
  TimeWindow window;
  const Stream* stream = nullptr;
  std::size_t first = 0;
  std::size_t last = 0;  // exclusive

  std::size_t size() const { return last - first; }
  bool empty() const { return first == last; }
};

// Contiguous, non-overlapping sub-windows anchored at horizon.start, each of
// length `period` except a final truncated one when the period does not
// divide the horizon. Dropping the tail would silently lower recall, so it is
// kept. Throws InvalidArgument when the period exceeds the horizon.
std::vector<TimeWindow> partition(TimeWindow horizon, PeriodLength period);

WindowSlice slice(const Stream& stream, TimeWindow window);

// Wall-clock-aligned instants t with span.start + lookback <= t <= span.end,
// stepping by the scheme cadence. Each instant implies the horizon
// [t - lookback, t). Returns an empty collection when the stream is shorter
// than the lookback (callers decide whether that warrants a warning).
std::vector<Instant> evaluation_instants(const Stream& stream, const SchemeConfig& scheme);

}  // namespace rankload
