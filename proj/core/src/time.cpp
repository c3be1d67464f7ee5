#include "rankload/time.hpp"

#include <array>
#include <charconv>
#include <cstdio>

namespace rankload {

namespace {

// Civil-date conversions after Howard Hinnant's algorithms; valid for the
// proleptic Gregorian calendar.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp + (mp < 10 ? 3 : static_cast<unsigned>(-9));
  y = yy + (m <= 2);
}

bool is_leap(std::int64_t y) {
  return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

unsigned days_in_month(std::int64_t y, unsigned m) {
  static constexpr std::array<unsigned, 12> kDays = {31, 28, 31, 30, 31, 30,
                                                     31, 31, 30, 31, 30, 31};
  if (m == 2 && is_leap(y)) return 29;
  return kDays[m - 1];
}

bool take_digits(std::string_view& s, int count, std::int64_t& out) {
  if (s.size() < static_cast<std::size_t>(count)) return false;
  out = 0;
  for (int i = 0; i < count; ++i) {
    const char c = s[static_cast<std::size_t>(i)];
    if (c < '0' || c > '9') return false;
    out = out * 10 + (c - '0');
  }
  s.remove_prefix(static_cast<std::size_t>(count));
  return true;
}

bool take(std::string_view& s, char expected) {
  if (s.empty() || s.front() != expected) return false;
  s.remove_prefix(1);
  return true;
}

std::optional<Instant> parse_rfc3339(std::string_view s) {
  std::int64_t year = 0, month = 0, day = 0, hour = 0, minute = 0, second = 0;
  if (!take_digits(s, 4, year) || !take(s, '-') || !take_digits(s, 2, month) ||
      !take(s, '-') || !take_digits(s, 2, day)) {
    return std::nullopt;
  }
  if (s.empty() || (s.front() != 'T' && s.front() != 't')) return std::nullopt;
  s.remove_prefix(1);
  if (!take_digits(s, 2, hour) || !take(s, ':') || !take_digits(s, 2, minute) ||
      !take(s, ':') || !take_digits(s, 2, second)) {
    return std::nullopt;
  }
  if (month < 1 || month > 12) return std::nullopt;
  if (day < 1 || day > days_in_month(year, static_cast<unsigned>(month))) return std::nullopt;
  if (hour > 23 || minute > 59 || second > 59) return std::nullopt;

  if (!s.empty() && s.front() == '.') {
    s.remove_prefix(1);
    std::size_t n = 0;
    while (n < s.size() && s[n] >= '0' && s[n] <= '9') ++n;
    if (n == 0) return std::nullopt;
    s.remove_prefix(n);  // truncate to second precision
  }

  std::int64_t offset = 0;
  if (s.size() == 1 && (s.front() == 'Z' || s.front() == 'z')) {
    s.remove_prefix(1);
  } else if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    const bool negative = s.front() == '-';
    s.remove_prefix(1);
    std::int64_t oh = 0, om = 0;
    if (!take_digits(s, 2, oh) || !take(s, ':') || !take_digits(s, 2, om)) return std::nullopt;
    if (oh > 23 || om > 59 || !s.empty()) return std::nullopt;
    offset = (oh * 60 + om) * 60;
    if (negative) offset = -offset;
  } else {
    return std::nullopt;
  }
  if (!s.empty()) return std::nullopt;

  const std::int64_t days =
      days_from_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day));
  return days * 86400 + hour * 3600 + minute * 60 + second - offset;
}

}  // namespace

std::optional<Instant> parse_instant(std::string_view text) {
  if (text.empty()) return std::nullopt;
  std::string_view digits = text;
  if (digits.front() == '-') digits.remove_prefix(1);
  const bool all_digits =
      !digits.empty() &&
      digits.find_first_not_of("0123456789") == std::string_view::npos;
  if (all_digits) {
    std::int64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
    return value;
  }
  return parse_rfc3339(text);
}

std::string format_rfc3339(Instant t) {
  std::int64_t days = t / 86400;
  std::int64_t rem = t % 86400;
  if (rem < 0) {
    rem += 86400;
    --days;
  }
  std::int64_t year = 0;
  unsigned month = 0, day = 0;
  civil_from_days(days, year, month, day);
  const int hour = static_cast<int>(rem / 3600);
  const int minute = static_cast<int>((rem % 3600) / 60);
  const int second = static_cast<int>(rem % 60);
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02d:%02d:%02dZ",
                static_cast<long long>(year), month, day, hour, minute, second);
  return buf;
}

Instant align_down(Instant t, std::int64_t granularity) {
  Instant q = t / granularity;
  if (t % granularity != 0 && t < 0) --q;
  return q * granularity;
}

Instant align_up(Instant t, std::int64_t granularity) {
  const Instant down = align_down(t, granularity);
  return down == t ? t : down + granularity;
}

}  // namespace rankload
