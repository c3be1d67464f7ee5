#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace rankload {

// UTC instant as seconds since the Unix epoch. Everything in this project
// operates at second precision.
using Instant = std::int64_t;

inline constexpr std::int64_t kSecondsPerMinute = 60;
inline constexpr std::int64_t kSecondsPerHour = 3600;

// Accepts an RFC 3339 timestamp ("2013-06-20T14:03:00Z"; numeric offsets and
// fractional seconds are accepted, the fraction is truncated) or a decimal
// count of epoch seconds. Returns nullopt if the text is neither.
std::optional<Instant> parse_instant(std::string_view text);

std::string format_rfc3339(Instant t);

// Alignment to a positive granularity in seconds, correct for negative times.
Instant align_down(Instant t, std::int64_t granularity);
Instant align_up(Instant t, std::int64_t granularity);

}  // namespace rankload
