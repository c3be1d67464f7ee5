#include "rankload/windowing.hpp"

#include "rankload/errors.hpp"

namespace rankload {

void SchemeConfig::validate(std::int32_t max_period_minutes) const {
  if (lookback_minutes < 1) throw InvalidArgument("lookback must be positive");
  if (cadence_minutes < 1) throw InvalidArgument("cadence must be positive");
  if (cadence_minutes > lookback_minutes) throw InvalidArgument("cadence exceeds lookback");
  if (lookback_minutes < max_period_minutes) {
    throw InvalidArgument("lookback shorter than the largest alerting period");
  }
}

std::vector<TimeWindow> partition(TimeWindow horizon, PeriodLength period) {
  if (horizon.start >= horizon.end) throw InvalidArgument("empty horizon");
  if (period.minutes < 1) throw InvalidArgument("period must be positive");
  const std::int64_t step = static_cast<std::int64_t>(period.minutes) * kSecondsPerMinute;
  if (step > horizon.seconds()) throw InvalidArgument("period longer than horizon");

  std::vector<TimeWindow> windows;
  windows.reserve(static_cast<std::size_t>(horizon.seconds() / step + 1));
  for (Instant t = horizon.start; t < horizon.end; t += step) {
    windows.push_back({t, t + step < horizon.end ? t + step : horizon.end});
  }
  return windows;
}

WindowSlice slice(const Stream& stream, TimeWindow window) {
  const auto [first, last] = stream.index_range(window.start, window.end);
  return {window, &stream, first, last};
}

std::vector<Instant> evaluation_instants(const Stream& stream, const SchemeConfig& scheme) {
  std::vector<Instant> instants;
  if (stream.empty()) return instants;
  const std::int64_t cadence = scheme.cadence_minutes * kSecondsPerMinute;
  const Instant first = align_up(stream.span_start() + scheme.lookback_seconds(),
                                 scheme.alignment_seconds());
  for (Instant t = first; t <= stream.span_end(); t += cadence) {
    instants.push_back(t);
  }
  return instants;
}

}  // namespace rankload
