#include <doctest.h>

#include <random>
#include <set>

#include "rankload/errors.hpp"
#include "rankload/windowing.hpp"
#include "support/helpers.hpp"

using namespace rankload;
using rankload::test::msg;

namespace {
constexpr Instant kT0 = kDefaultSynthStart;  // hour aligned
}

TEST_CASE("partition with exact division") {
  const auto windows = partition({kT0, kT0 + 60 * 60}, {20});
  REQUIRE(windows.size() == 3);
  for (const TimeWindow& w : windows) CHECK(w.seconds() == 20 * 60);
  CHECK(windows.front().start == kT0);
  CHECK(windows.back().end == kT0 + 3600);
}

TEST_CASE("partition keeps the truncated tail") {
  const auto windows = partition({kT0, kT0 + 60 * 60}, {40});
  REQUIRE(windows.size() == 2);
  CHECK(windows[0].seconds() == 40 * 60);
  CHECK(windows[1].seconds() == 20 * 60);
}

TEST_CASE("partition of a day by 50 minutes") {
  // 1440 = 28 * 50 + 40
  const auto windows = partition({kT0, kT0 + 1440 * 60}, {50});
  REQUIRE(windows.size() == 29);
  for (std::size_t i = 0; i + 1 < windows.size(); ++i) CHECK(windows[i].seconds() == 50 * 60);
  CHECK(windows.back().seconds() == 40 * 60);
}

TEST_CASE("partition rejects a period longer than the horizon") {
  CHECK_THROWS_AS(partition({kT0, kT0 + 600}, {11}), InvalidArgument);
  CHECK_NOTHROW(partition({kT0, kT0 + 600}, {10}));
}

TEST_CASE("partition lengths always sum to the horizon") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    const std::int64_t horizon_min = 1 + static_cast<std::int64_t>(rng() % 2000);
    const std::int32_t period = 1 + static_cast<std::int32_t>(rng() % horizon_min);
    const TimeWindow horizon{kT0, kT0 + horizon_min * 60};
    std::int64_t total = 0;
    Instant expected_start = horizon.start;
    for (const TimeWindow& w : partition(horizon, {period})) {
      CHECK(w.start == expected_start);
      expected_start = w.end;
      total += w.seconds();
    }
    CHECK(total == horizon.seconds());
    CHECK(expected_start == horizon.end);
  }
}

TEST_CASE("dividing periods refine coarser partitions") {
  const TimeWindow horizon{kT0, kT0 + 1440 * 60};
  for (const auto& [fine, coarse] : std::vector<std::pair<int, int>>{
           {10, 20}, {10, 30}, {10, 40}, {10, 50}, {10, 60}, {20, 40}, {20, 60}, {30, 60}}) {
    std::set<Instant> fine_bounds;
    for (const TimeWindow& w : partition(horizon, {fine})) fine_bounds.insert(w.start);
    for (const TimeWindow& w : partition(horizon, {coarse})) {
      CAPTURE(fine);
      CAPTURE(coarse);
      CHECK(fine_bounds.count(w.start) == 1);
    }
  }
}

TEST_CASE("slice respects half-open boundaries") {
  const Stream s = Stream::create({
      msg("a", kT0, 0.1, false),
      msg("b", kT0 + 599, 0.2, true),
      msg("c", kT0 + 600, 0.3, false),  // exactly at window end: excluded
  });
  const WindowSlice ws = slice(s, {kT0, kT0 + 600});
  CHECK(ws.size() == 2);
  CHECK(s.messages()[ws.first].id == "a");

  CHECK(slice(s, {kT0, kT0 + 601}).size() == 3);       // whole span
  CHECK(slice(s, {kT0 - 600, kT0}).empty());           // before first message
}

TEST_CASE("sub-window slices concatenate to the horizon slice") {
  const Stream s = rankload::test::random_stream(4, kT0, 120);
  const TimeWindow horizon{kT0, kT0 + 120 * 60};
  const WindowSlice whole = slice(s, horizon);
  for (const std::int32_t period : {10, 25, 60, 47}) {
    std::size_t total = 0;
    std::size_t expected_first = whole.first;
    for (const TimeWindow& w : partition(horizon, {period})) {
      const WindowSlice part = slice(s, w);
      CHECK(part.first == expected_first);
      expected_first = part.last;
      total += part.size();
    }
    CHECK(total == whole.size());
  }
}

TEST_CASE("periodic instants over a 48 hour stream") {
  const Stream s = Stream::create({
      msg("first", kT0, 0.5, true),
      msg("mid", kT0 + 17 * 3600 + 13, 0.4, false),
      msg("last", kT0 + 48 * 3600, 0.6, true),
  });
  const auto instants = evaluation_instants(s, SchemeConfig::periodic());
  REQUIRE(instants.size() == 25);  // hours 24..48 inclusive
  CHECK(instants.front() == kT0 + 24 * 3600);
  CHECK(instants.back() == kT0 + 48 * 3600);
  for (const Instant t : instants) CHECK(t % kSecondsPerHour == 0);
}

TEST_CASE("realtime instants over a 60 minute stream") {
  const Stream s = Stream::create({
      msg("first", kT0, 0.5, true),
      msg("last", kT0 + 3600, 0.6, true),
  });
  const auto instants = evaluation_instants(s, SchemeConfig::realtime());
  REQUIRE(instants.size() == 1);
  CHECK(instants.front() == kT0 + 3600);
}

TEST_CASE("stream shorter than the lookback yields no instants") {
  const Stream s = Stream::create({
      msg("first", kT0, 0.5, true),
      msg("last", kT0 + 30 * 60, 0.6, true),
  });
  CHECK(evaluation_instants(s, SchemeConfig::periodic()).empty());
  CHECK(evaluation_instants(Stream{}, SchemeConfig::periodic()).empty());
}

TEST_CASE("instants align to the wall clock, not the stream start") {
  // Stream starts 7 minutes past the hour; the first periodic instant is the
  // next whole hour at least one lookback later.
  const Stream s = Stream::create({
      msg("first", kT0 + 7 * 60, 0.5, true),
      msg("last", kT0 + 7 * 60 + 26 * 3600, 0.6, true),
  });
  const auto instants = evaluation_instants(s, SchemeConfig::periodic());
  REQUIRE(!instants.empty());
  CHECK(instants.front() == kT0 + 25 * 3600);
  for (const Instant t : instants) CHECK(t % kSecondsPerHour == 0);
}

TEST_CASE("scheme config validation") {
  SchemeConfig bad = SchemeConfig::periodic();
  bad.cadence_minutes = bad.lookback_minutes + 1;
  CHECK_THROWS_AS(bad.validate(60), InvalidArgument);
  SchemeConfig short_lookback = SchemeConfig::realtime();
  short_lookback.lookback_minutes = 30;
  short_lookback.cadence_minutes = 1;
  CHECK_THROWS_AS(short_lookback.validate(60), InvalidArgument);
  CHECK_NOTHROW(SchemeConfig::periodic().validate(60));
  CHECK_NOTHROW(SchemeConfig::realtime().validate(60));
}
