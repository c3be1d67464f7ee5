#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rankload/ranking.hpp"
#include "rankload/rational.hpp"
#include "rankload/windowing.hpp"

namespace rankload {

// One (k, period) policy: the metric it attains over a horizon and the
// review workload it demands. Workload is an exact rational so grid values
// like 1.2, 1.5 and 2.4 compare with zero tolerance downstream.
struct RwCell {
  int k = 1;
  PeriodLength period{};
  std::optional<double> metric;  // nullopt = UNDEFINED
  Rational workload;
  std::size_t alerts_issued = 0;

  bool defined() const { return metric.has_value(); }
};

// Complete k x period grid evaluated over one horizon at one instant.
// Cells are stored row-major: k outer (ascending), period inner (ascending).
struct RwMatrix {
  Instant evaluated_at = 0;
  TimeWindow horizon{0, kSecondsPerHour};
  MetricKind metric_kind = MetricKind::recall_at_k;
  std::vector<int> k_values;
  std::vector<PeriodLength> periods;
  std::vector<RwCell> cells;

  std::size_t cell_index(std::size_t k_idx, std::size_t p_idx) const {
    return k_idx * periods.size() + p_idx;
  }
  const RwCell* find(int k, std::int32_t period_minutes) const;
  Rational max_workload() const;
  std::size_t defined_count() const;
};

std::vector<int> default_k_values();          // 1..10
std::vector<PeriodLength> default_periods();  // {10,20,30,40,50,60} minutes

// Review workload w = k * horizon_minutes / period, i.e. the number of alerts
// a user must monitor per `horizon_minutes` of wall-clock time. The project
// fixes horizon_minutes = 60 so matrices from different lookbacks stay
// comparable in per-hour units.
Rational workload(int k, PeriodLength period, int horizon_minutes = 60);

RwMatrix build_rw_matrix(const Stream& stream, TimeWindow horizon, MetricKind kind,
                         const std::vector<int>& k_values,
                         const std::vector<PeriodLength>& periods);
RwMatrix build_rw_matrix(const Stream& stream, TimeWindow horizon,
                         MetricKind kind = MetricKind::recall_at_k);

// One point of the attention-budget staircase: the best metric attainable at
// workload <= budget.
struct BudgetPoint {
  Rational budget;
  double best_metric = 0.0;
};

// One BudgetPoint per distinct workload value in the matrix, ascending.
// Returns an empty collection when no cell is defined (warning outcome).
std::vector<BudgetPoint> budget_frontier(const RwMatrix& matrix);

// CSV schema: `k,period_min,metric,workload,alerts_issued`; UNDEFINED metric
// serialized as an empty field; rows ordered by k then period.
std::string matrix_to_csv(const RwMatrix& matrix);
RwMatrix matrix_from_csv(std::string_view text);

std::string frontier_to_csv(const std::vector<BudgetPoint>& frontier);

}  // namespace rankload
