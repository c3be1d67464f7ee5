#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rankload/rw_matrix.hpp"

namespace rankload {

// Epsilon-Pareto front over a matrix's defined cells, maximizing the metric
// and minimizing workload. For epsilon = 0 this is the exact non-dominated
// set; for epsilon > 0 dominance is the additive epsilon rule applied in
// normalized objective units (the metric is already in [0,1]; workload is
// divided by the matrix's maximum workload).
struct ParetoFront {
  std::vector<RwCell> cells;  // ordered by workload ascending
  double epsilon = 0.0;
};

enum class Policy { pareto, greedy_max_recall, greedy_min_workload };

std::string_view to_string(Policy policy);

// The constraints a recommendation answered, if any.
struct Constraint {
  std::optional<double> desired_recall;
  std::optional<Rational> budget_cap;
};

struct Recommendation {
  RwCell cell;
  Policy policy = Policy::pareto;
  bool feasible = true;
  Constraint constraint;
};

// Cumulative attention budget over a whole run: the sum of selected
// workloads may never exceed total_budget.
struct BudgetConfig {
  Rational total_budget;
  std::size_t horizon_count = 0;
};

// True iff `a` epsilon-dominates `b`: a.metric + eps >= b.metric and
// a.workload_norm - eps <= b.workload_norm, with at least one strict
// inequality when eps == 0 (classic Pareto dominance; evaluated exactly).
// Throws InvalidArgument when either cell is UNDEFINED.
bool dominates(const RwCell& a, const RwCell& b, double epsilon, const Rational& max_workload);

// Throws InvalidArgument when the matrix has no defined cells. Deterministic:
// among epsilon-equivalent cells, the one with the larger period, then the
// smaller k, is retained.
ParetoFront pareto_front(const RwMatrix& matrix, double epsilon = 0.0);

// Minimum-workload front cell with metric >= desired_recall; ties broken by
// larger period (fewer interruptions), then smaller k. When no front cell
// qualifies, returns the maximum-metric cell with feasible = false: operators
// need an answer, not a refusal.
Recommendation recommend(const ParetoFront& front, double desired_recall);

// Workload-blind argmax of the metric. Ties: smaller workload, larger period,
// smaller k.
Recommendation greedy_max_recall(const RwMatrix& matrix);

// Metric-blind minimum workload; ties resolved by row-major order (k
// ascending, then period ascending), so the baseline can pick a dominated
// cell. That shortcoming is the point of the baseline.
Recommendation greedy_min_workload(const RwMatrix& matrix);

// One entry per evaluation. A skip (no affordable cell) carries no
// recommendation and spends nothing.
struct BudgetedPick {
  std::optional<Recommendation> recommendation;
  Rational spent;
  Rational remaining_after;
};

// Uniform per-evaluation allowance (total / horizon_count) with carryover of
// unspent budget. The sum of spent workloads never exceeds total_budget;
// the arithmetic is exact.
std::vector<BudgetedPick> budgeted_schedule(const std::vector<RwMatrix>& matrices,
                                            const BudgetConfig& budget, double desired_recall,
                                            double epsilon = 0.0);

// CSV schema: `k,period_min,metric,workload,on_front`; one row per matrix
// cell in k-then-period order.
std::string front_to_csv(const RwMatrix& matrix, const ParetoFront& front);

// JSON object {"k":, "period_min":, "metric":, "workload":, "policy":, "feasible":}.
std::string recommendation_to_json(const Recommendation& rec);

}  // namespace rankload
