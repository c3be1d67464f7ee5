#include "rankload/message.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

#include "rankload/errors.hpp"

namespace rankload {

bool operator==(const Message& a, const Message& b) {
  return a.id == b.id && a.ts == b.ts && a.score == b.score && a.relevant == b.relevant &&
         a.text == b.text;
}

Stream Stream::create(std::vector<Message> messages) {
  if (messages.size() >= std::numeric_limits<std::uint32_t>::max()) {
    throw ParseError("stream too large");
  }
  std::unordered_set<std::string_view> seen;
  seen.reserve(messages.size());
  for (const Message& m : messages) {
    if (m.id.empty()) throw ParseError("empty message id");
    if (!std::isfinite(m.score)) throw ParseError("non-finite score for id \"" + m.id + "\"");
    if (!seen.insert(m.id).second) throw ParseError("duplicate id \"" + m.id + "\"");
  }
  std::sort(messages.begin(), messages.end(), [](const Message& a, const Message& b) {
    if (a.ts != b.ts) return a.ts < b.ts;
    return a.id < b.id;
  });

  Stream s;
  s.messages_ = std::move(messages);
  s.relevant_prefix_.resize(s.messages_.size() + 1, 0);
  for (std::size_t i = 0; i < s.messages_.size(); ++i) {
    s.relevant_prefix_[i + 1] = s.relevant_prefix_[i] + (s.messages_[i].relevant ? 1u : 0u);
  }
  return s;
}

Instant Stream::span_start() const { return messages_.front().ts; }

Instant Stream::span_end() const { return messages_.back().ts; }

std::int64_t Stream::span_seconds() const {
  return empty() ? 0 : span_end() - span_start();
}

std::pair<std::size_t, std::size_t> Stream::index_range(Instant start, Instant end) const {
  const auto ts_less = [](const Message& m, Instant t) { return m.ts < t; };
  const auto first = std::lower_bound(messages_.begin(), messages_.end(), start, ts_less);
  const auto last = std::lower_bound(first, messages_.end(), end, ts_less);
  return {static_cast<std::size_t>(first - messages_.begin()),
          static_cast<std::size_t>(last - messages_.begin())};
}

std::size_t Stream::relevant_count(std::size_t first, std::size_t last) const {
  return relevant_prefix_[last] - relevant_prefix_[first];
}

void SynthConfig::validate() const {
  if (duration_minutes < 1) throw InvalidArgument("duration_minutes must be positive");
  if (!std::isfinite(arrival_rate) || arrival_rate <= 0.0) {
    throw InvalidArgument("arrival_rate must be positive");
  }
  if (arrival_rate > 600.0) throw InvalidArgument("arrival_rate too large (max 600/min)");
  if (!(relevance_prob >= 0.0 && relevance_prob <= 1.0)) {
    throw InvalidArgument("relevance_prob must be in [0,1]");
  }
  if (!std::isfinite(scores.mu_relevant) || !std::isfinite(scores.mu_irrelevant) ||
      !std::isfinite(scores.sigma) || scores.sigma <= 0.0) {
    throw InvalidArgument("score model parameters must be finite with sigma > 0");
  }
  if (!(scores.mu_relevant > scores.mu_irrelevant)) {
    throw InvalidArgument("score model requires mu_relevant > mu_irrelevant");
  }
}

}  // namespace rankload
