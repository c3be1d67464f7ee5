#include "rankload/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rankload/errors.hpp"

namespace rankload {

std::string_view to_string(MetricKind kind) {
  switch (kind) {
    case MetricKind::recall_at_k: return "recall_at_k";
    case MetricKind::precision_at_k: return "precision_at_k";
    case MetricKind::ndcg_at_k: return "ndcg_at_k";
  }
  return "unknown";
}

std::optional<MetricKind> metric_from_string(std::string_view name) {
  if (name == "recall_at_k") return MetricKind::recall_at_k;
  if (name == "precision_at_k") return MetricKind::precision_at_k;
  if (name == "ndcg_at_k") return MetricKind::ndcg_at_k;
  return std::nullopt;
}

namespace detail {

std::vector<std::uint32_t> top_k_indices(const Stream& stream, std::size_t first,
                                         std::size_t last, int k) {
  if (k < 1) throw InvalidArgument("k must be positive");
  const auto& msgs = stream.messages();
  std::vector<std::uint32_t> order(last - first);
  std::iota(order.begin(), order.end(), static_cast<std::uint32_t>(first));
  const auto better = [&msgs](std::uint32_t a, std::uint32_t b) {
    const Message& ma = msgs[a];
    const Message& mb = msgs[b];
    if (ma.score != mb.score) return ma.score > mb.score;
    if (ma.ts != mb.ts) return ma.ts < mb.ts;
    return ma.id < mb.id;
  };
  const auto depth = std::min<std::size_t>(static_cast<std::size_t>(k), order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(depth),
                    order.end(), better);
  order.resize(depth);
  return order;
}

}  // namespace detail

RankedList rank_top_k(const WindowSlice& slice, int k) {
  if (k < 1) throw InvalidArgument("k must be positive");
  RankedList out{slice.window, k, {}};
  if (slice.stream == nullptr || slice.empty()) return out;
  const auto picks = detail::top_k_indices(*slice.stream, slice.first, slice.last, k);
  out.entries.reserve(picks.size());
  for (const auto idx : picks) out.entries.push_back(slice.stream->messages()[idx].id);
  return out;
}

std::vector<std::uint32_t> alert_set_indices(const Stream& stream, TimeWindow horizon, int k,
                                             PeriodLength period) {
  std::vector<std::uint32_t> all;
  for (const TimeWindow& w : partition(horizon, period)) {
    const auto [first, last] = stream.index_range(w.start, w.end);
    if (first == last) continue;
    auto picks = detail::top_k_indices(stream, first, last, k);
    all.insert(all.end(), picks.begin(), picks.end());
  }
  std::sort(all.begin(), all.end());
  return all;
}

std::set<std::string> alert_set(const Stream& stream, TimeWindow horizon, int k,
                                PeriodLength period) {
  std::set<std::string> ids;
  for (const auto idx : alert_set_indices(stream, horizon, k, period)) {
    ids.insert(stream.messages()[idx].id);
  }
  return ids;
}

std::optional<double> horizon_metric(const Stream& stream, TimeWindow horizon, int k,
                                     PeriodLength period, MetricKind kind) {
  if (kind == MetricKind::ndcg_at_k) {
    double sum = 0.0;
    std::size_t counted = 0;
    for (const TimeWindow& w : partition(horizon, period)) {
      const auto [first, last] = stream.index_range(w.start, w.end);
      const std::size_t relevant = stream.relevant_count(first, last);
      if (relevant == 0) continue;
      const auto picks = detail::top_k_indices(stream, first, last, k);
      double dcg = 0.0;
      for (std::size_t i = 0; i < picks.size(); ++i) {
        if (stream.messages()[picks[i]].relevant) {
          dcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
        }
      }
      const std::size_t ideal = std::min<std::size_t>(static_cast<std::size_t>(k), relevant);
      double idcg = 0.0;
      for (std::size_t i = 0; i < ideal; ++i) {
        idcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
      }
      sum += dcg / idcg;
      ++counted;
    }
    if (counted == 0) return std::nullopt;
    return sum / static_cast<double>(counted);
  }

  const auto alerts = alert_set_indices(stream, horizon, k, period);
  std::size_t hits = 0;
  for (const auto idx : alerts) {
    if (stream.messages()[idx].relevant) ++hits;
  }
  if (kind == MetricKind::recall_at_k) {
    const auto [first, last] = stream.index_range(horizon.start, horizon.end);
    const std::size_t relevant = stream.relevant_count(first, last);
    if (relevant == 0) return std::nullopt;
    return static_cast<double>(hits) / static_cast<double>(relevant);
  }
  // precision_at_k
  if (alerts.empty()) return std::nullopt;
  return static_cast<double>(hits) / static_cast<double>(alerts.size());
}

}  // namespace rankload
