#include <doctest.h>

#include <cmath>

#include "rankload/errors.hpp"
#include "rankload/stream_io.hpp"
#include "rankload/synth.hpp"
#include "support/helpers.hpp"

using namespace rankload;
using rankload::test::msg;

namespace {

constexpr std::string_view kJsonl =
    R"({"id": "b", "ts": "2013-06-20T14:03:00Z", "score": 0.83, "label": true, "text": "need water"}
{"id": "a", "ts": "2013-06-20T14:01:00Z", "score": 0.2, "label": false}
{"id": "c", "ts": 1371736980, "score": -1.5, "label": true}
)";

}  // namespace

TEST_CASE("jsonl load sorts by timestamp then id") {
  const Stream s = load_stream(kJsonl, StreamFormat::jsonl);
  REQUIRE(s.size() == 3);
  CHECK(s.messages()[0].id == "a");
  // b and c share a timestamp; id ascending breaks the tie.
  CHECK(s.messages()[1].id == "b");
  CHECK(s.messages()[2].id == "c");
  CHECK(s.messages()[1].text == "need water");
  CHECK(!s.messages()[0].text.has_value());
  CHECK(s.span_start() == 1371736860);
  CHECK(s.span_end() == 1371736980);
}

TEST_CASE("csv load accepts both timestamp forms and 0/1 labels") {
  const std::string csv =
      "id,ts,score,label,text\n"
      "x1,2020-01-01T00:00:30Z,0.5,1,\n"
      "x2,1577836801,0.25,0,\"hello, world\"\n";
  const Stream s = load_stream(csv, StreamFormat::csv);
  REQUIRE(s.size() == 2);
  CHECK(s.messages()[0].id == "x2");
  CHECK(s.messages()[0].text == "hello, world");
  CHECK(!s.messages()[1].text.has_value());
  CHECK(s.messages()[1].relevant);
}

TEST_CASE("empty input loads an empty stream") {
  CHECK(load_stream("", StreamFormat::jsonl).empty());
  CHECK(load_stream("", StreamFormat::csv).empty());
}

TEST_CASE("load rejects the documented error cases") {
  // non-finite score
  CHECK_THROWS_WITH_AS(load_stream("id,ts,score,label,text\na,0,NaN,1,\n", StreamFormat::csv),
                       doctest::Contains("non-finite score"), ParseError);
  CHECK_THROWS_AS(load_stream("id,ts,score,label,text\na,0,inf,1,\n", StreamFormat::csv),
                  ParseError);
  // duplicate id
  CHECK_THROWS_WITH_AS(
      load_stream("id,ts,score,label,text\na,0,0.5,1,\na,60,0.2,0,\n", StreamFormat::csv),
      doctest::Contains("duplicate id"), ParseError);
  // unknown label token
  CHECK_THROWS_WITH_AS(load_stream("id,ts,score,label,text\na,0,0.5,yes,\n", StreamFormat::csv),
                       doctest::Contains("unknown label"), ParseError);
  CHECK_THROWS_AS(load_stream(R"({"id":"a","ts":0,"score":0.5,"label":1})", StreamFormat::jsonl),
                  ParseError);
  // unparseable timestamp
  CHECK_THROWS_WITH_AS(load_stream("id,ts,score,label,text\na,noon,0.5,1,\n", StreamFormat::csv),
                       doctest::Contains("unparseable timestamp"), ParseError);
  // missing header
  CHECK_THROWS_AS(load_stream("a,0,0.5,1,\n", StreamFormat::csv), ParseError);
}

TEST_CASE("serialize/load round trip preserves streams exactly") {
  std::vector<Message> messages = {
      msg("plain", 1577836800, 0.125, true),
      {"quoted", 1577836860, -2.0, false, "contains \"quotes\", commas,\nand a newline"},
      {"empty-text", 1577836920, 1e-9, true, ""},
      msg("no-text", 1577836980, 0.875, false),
  };
  const Stream original = Stream::create(messages);
  for (const StreamFormat format : {StreamFormat::jsonl, StreamFormat::csv}) {
    const Stream reloaded = load_stream(serialize_stream(original, format), format);
    REQUIRE(reloaded.size() == original.size());
    for (std::size_t i = 0; i < original.size(); ++i) {
      CAPTURE(i);
      CHECK(reloaded.messages()[i] == original.messages()[i]);
    }
  }
}

TEST_CASE("round trip holds for generated streams") {
  const Stream s = generate_stream({.seed = 42, .duration_minutes = 90});
  for (const StreamFormat format : {StreamFormat::jsonl, StreamFormat::csv}) {
    const Stream reloaded = load_stream(serialize_stream(s, format), format);
    REQUIRE(reloaded.size() == s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      CHECK(reloaded.messages()[i] == s.messages()[i]);
    }
  }
}

TEST_CASE("generator is a pure function of its config") {
  SynthConfig config{.seed = 7, .duration_minutes = 120};
  const std::string a = serialize_stream(generate_stream(config), StreamFormat::jsonl);
  const std::string b = serialize_stream(generate_stream(config), StreamFormat::jsonl);
  CHECK(a == b);
  config.seed = 8;
  CHECK(serialize_stream(generate_stream(config), StreamFormat::jsonl) != a);
}

TEST_CASE("relevance_prob 0 yields no relevant labels") {
  const Stream s = generate_stream({.seed = 3, .duration_minutes = 60, .relevance_prob = 0.0});
  for (const Message& m : s.messages()) CHECK(!m.relevant);
}

TEST_CASE("relevant fraction converges to relevance_prob") {
  const Stream s = generate_stream(
      {.seed = 1, .duration_minutes = 1440, .arrival_rate = 2.0, .relevance_prob = 0.3});
  std::size_t relevant = 0;
  for (const Message& m : s.messages()) relevant += m.relevant ? 1 : 0;
  const double fraction = static_cast<double>(relevant) / static_cast<double>(s.size());
  CHECK(fraction == doctest::Approx(0.3).epsilon(0.17));  // +-0.05 absolute
  CHECK(std::abs(fraction - 0.3) <= 0.05);
}

TEST_CASE("relevant messages score higher on average when mu1 > mu0") {
  const Stream s = generate_stream({.seed = 11, .duration_minutes = 720});
  double sum_rel = 0.0, sum_irr = 0.0;
  std::size_t n_rel = 0, n_irr = 0;
  for (const Message& m : s.messages()) {
    if (m.relevant) {
      sum_rel += m.score;
      ++n_rel;
    } else {
      sum_irr += m.score;
      ++n_irr;
    }
  }
  REQUIRE(n_rel > 0);
  REQUIRE(n_irr > 0);
  CHECK(sum_rel / static_cast<double>(n_rel) > sum_irr / static_cast<double>(n_irr));
}

TEST_CASE("every generated timestamp lies inside the configured window") {
  const SynthConfig config{.seed = 5, .duration_minutes = 30};
  const Stream s = generate_stream(config);
  for (const Message& m : s.messages()) {
    CHECK(m.ts >= config.start);
    CHECK(m.ts < config.start + config.duration_minutes * kSecondsPerMinute);
  }
}

TEST_CASE("synth config validation") {
  SynthConfig config;
  config.relevance_prob = 1.5;
  CHECK_THROWS_AS(config.validate(), InvalidArgument);
  config = {};
  config.arrival_rate = 0.0;
  CHECK_THROWS_AS(config.validate(), InvalidArgument);
  config = {};
  config.duration_minutes = 0;
  CHECK_THROWS_AS(config.validate(), InvalidArgument);
  config = {};
  config.scores.mu_relevant = config.scores.mu_irrelevant;
  CHECK_THROWS_AS(config.validate(), InvalidArgument);
}
