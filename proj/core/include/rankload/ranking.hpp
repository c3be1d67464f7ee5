#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "rankload/windowing.hpp"

namespace rankload {

enum class MetricKind { recall_at_k, precision_at_k, ndcg_at_k };

std::string_view to_string(MetricKind kind);
std::optional<MetricKind> metric_from_string(std::string_view name);

// Top-k alerts for one sub-window, best first.
struct RankedList {
  TimeWindow window;
  int k = 0;
  std::vector<std::string> entries;
};

namespace detail {
// Indices of the top-k messages in stream index range [first, last), ordered
// by score descending, ties by earlier timestamp, then id ascending. The tie
// order is total, which keeps every ranking deterministic.
std::vector<std::uint32_t> top_k_indices(const Stream& stream, std::size_t first,
                                         std::size_t last, int k);
}  // namespace detail

RankedList rank_top_k(const WindowSlice& slice, int k);

// Union of per-sub-window top-k picks over partition(horizon, period).
// Sub-windows are disjoint, so the union never collapses duplicates.
std::vector<std::uint32_t> alert_set_indices(const Stream& stream, TimeWindow horizon, int k,
                                             PeriodLength period);
std::set<std::string> alert_set(const Stream& stream, TimeWindow horizon, int k,
                                PeriodLength period);

// Horizon-level metric for one (k, period) policy. Recall and precision are
// computed over the union alert set; NDCG is the mean of per-sub-window
// binary-gain DCG@k / IDCG@k with zero-relevant sub-windows excluded.
// Returns nullopt (UNDEFINED) when the denominator population is empty;
// UNDEFINED is a value, not an error.
std::optional<double> horizon_metric(const Stream& stream, TimeWindow horizon, int k,
                                     PeriodLength period, MetricKind kind);

}  // namespace rankload
