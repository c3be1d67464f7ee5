#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rankload/time.hpp"

namespace rankload {

// One scored, labeled stream item. `score` is the upstream system's relevance
// belief and drives ranking; `relevant` is the ground-truth label and drives
// metrics. The two must never be conflated.
struct Message {
  std::string id;
  Instant ts = 0;
  double score = 0.0;
  bool relevant = false;
  std::optional<std::string> text;
};

bool operator==(const Message& a, const Message& b);

// Immutable timestamp-sorted message sequence. Construction canonicalizes
// order (ts ascending, ties by id ascending) and validates that ids are
// unique and non-empty and that scores are finite. Safe to share across
// concurrent readers once built.
class Stream {
public:
  Stream() = default;

  static Stream create(std::vector<Message> messages);

  const std::vector<Message>& messages() const { return messages_; }
  std::size_t size() const { return messages_.size(); }
  bool empty() const { return messages_.empty(); }

  // Span endpoints are the first and last message timestamps (inclusive);
  // undefined on an empty stream.
  Instant span_start() const;
  Instant span_end() const;
  std::int64_t span_seconds() const;

  // Index range [first, last) of messages with start <= ts < end.
  std::pair<std::size_t, std::size_t> index_range(Instant start, Instant end) const;

  // Number of relevant messages among indices [first, last).
  std::size_t relevant_count(std::size_t first, std::size_t last) const;

private:
  std::vector<Message> messages_;
  std::vector<std::uint32_t> relevant_prefix_;
};

struct ScoreModel {
  double mu_relevant = 1.0;
  double mu_irrelevant = 0.0;
  double sigma = 0.5;
};

// 2020-01-01T00:00:00Z. Synthetic streams start on an exact hour so that
// periodic evaluation instants land on round wall-clock boundaries.
inline constexpr Instant kDefaultSynthStart = 1577836800;

// Deterministic synthetic stream: Poisson arrivals per minute, Bernoulli
// relevance labels, scores from two Gaussians separated by label.
struct SynthConfig {
  std::uint64_t seed = 1;
  std::int64_t duration_minutes = 1440;
  double arrival_rate = 2.0;  // mean messages per minute
  double relevance_prob = 0.3;
  ScoreModel scores{};
  Instant start = kDefaultSynthStart;

  void validate() const;  // throws InvalidArgument
};

}  // namespace rankload
