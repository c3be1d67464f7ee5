#include "rankload/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

namespace rankload {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

struct Draws {
  std::mt19937_64 rng;

  explicit Draws(std::uint64_t seed) : rng(seed) {}

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

  // Knuth's product method; arrival rates are capped well below where
  // exp(-rate) underflows.
  int poisson(double rate) {
    const double limit = std::exp(-rate);
    int count = 0;
    double product = uniform();
    while (product > limit) {
      ++count;
      product *= uniform();
    }
    return count;
  }

  // Box-Muller; the second variate of the pair is discarded to keep the draw
  // sequence independent of call sites.
  double normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
  }
};

}  // namespace

Stream generate_stream(const SynthConfig& config) {
  config.validate();
  Draws draws(config.seed);

  struct Event {
    Instant ts;
    bool relevant;
    double score;
  };
  std::vector<Event> events;
  events.reserve(static_cast<std::size_t>(
      config.arrival_rate * static_cast<double>(config.duration_minutes) * 1.2 + 16.0));

  for (std::int64_t minute = 0; minute < config.duration_minutes; ++minute) {
    const int n = draws.poisson(config.arrival_rate);
    for (int i = 0; i < n; ++i) {
      const auto offset = static_cast<std::int64_t>(draws.uniform() * 60.0);
      const bool relevant = draws.uniform() < config.relevance_prob;
      const double mu = relevant ? config.scores.mu_relevant : config.scores.mu_irrelevant;
      const double score = mu + config.scores.sigma * draws.normal();
      events.push_back({config.start + minute * kSecondsPerMinute + std::min<std::int64_t>(offset, 59),
                        relevant, score});
    }
  }

  std::stable_sort(events.begin(), events.end(),
                   [](const Event& a, const Event& b) { return a.ts < b.ts; });

  std::vector<Message> messages;
  messages.reserve(events.size());
  char id_buf[24];
  for (std::size_t i = 0; i < events.size(); ++i) {
    std::snprintf(id_buf, sizeof(id_buf), "m%07zu", i + 1);
    messages.push_back(Message{id_buf, events[i].ts, events[i].score, events[i].relevant,
                               std::nullopt});
  }
  return Stream::create(std::move(messages));
}

}  // namespace rankload
