#include "rankload/selection.hpp"

#include <algorithm>
#include <charconv>

#include <json.hpp>

#include "rankload/errors.hpp"

namespace rankload {

namespace {

std::string shortest_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  (void)ec;
  return std::string(buf, ptr);
}

// Preference order among otherwise-equivalent cells: larger period first
// (fewer interruptions), then smaller k.
bool prefer(const RwCell& a, const RwCell& b) {
  if (a.period.minutes != b.period.minutes) return a.period.minutes > b.period.minutes;
  return a.k < b.k;
}

std::vector<const RwCell*> defined_cells(const RwMatrix& matrix) {
  std::vector<const RwCell*> cells;
  cells.reserve(matrix.cells.size());
  for (const RwCell& cell : matrix.cells) {
    if (cell.defined()) cells.push_back(&cell);
  }
  return cells;
}

// Exact non-dominated set under strict Pareto dominance. Single sweep over
// cells grouped by workload: a cell survives iff it tops its workload group
// and strictly beats every strictly cheaper cell's metric. Exact duplicates
// (equal workload and metric) do not dominate each other and all survive.
std::vector<const RwCell*> exact_front(std::vector<const RwCell*> cells) {
  std::sort(cells.begin(), cells.end(), [](const RwCell* a, const RwCell* b) {
    if (a->workload != b->workload) return a->workload < b->workload;
    if (*a->metric != *b->metric) return *a->metric > *b->metric;
    return prefer(*a, *b);
  });

  std::vector<const RwCell*> front;
  double best_cheaper = -1.0;
  std::size_t i = 0;
  while (i < cells.size()) {
    std::size_t j = i;
    while (j < cells.size() && cells[j]->workload == cells[i]->workload) ++j;
    const double group_max = *cells[i]->metric;
    for (std::size_t c = i; c < j; ++c) {
      if (*cells[c]->metric == group_max && group_max > best_cheaper) front.push_back(cells[c]);
    }
    if (group_max > best_cheaper) best_cheaper = group_max;
    i = j;
  }
  return front;
}

struct ChainPoint {
  double metric;
  double workload_norm;
  const RwCell* cell;
};

// Thins the exact front chain to an epsilon-front satisfying both front
// invariants: no member epsilon-dominates another, and every excluded defined
// cell is epsilon-dominated by a member. The chain is strictly increasing in
// both objectives, so a member covers a contiguous segment (cells below it
// within epsilon workload, cells above it within epsilon metric) and members
// must sit more than epsilon apart in both objectives. A shortest-selection
// DP picks the minimum number of members; among minimal selections the
// lowest-workload cells win, matching the fewer-interruptions preference.
//
// Every predicate reuses the exact floating-point expressions of dominates()
// (negated where needed), so the invariants hold bit-for-bit, boundary cases
// included.
std::vector<const RwCell*> epsilon_front(const std::vector<const RwCell*>& p0,
                                         double epsilon, const Rational& max_workload) {
  // Collapse exact duplicates to the preferred representative; the dropped
  // twin is mutually epsilon-dominated by it.
  std::vector<ChainPoint> chain;
  for (const RwCell* cell : p0) {
    const double wn = (cell->workload / max_workload).to_double();
    if (!chain.empty() && chain.back().cell->workload == cell->workload &&
        *chain.back().cell->metric == *cell->metric) {
      continue;  // p0 is ordered preferred-first within duplicate groups
    }
    chain.push_back({*cell->metric, wn, cell});
  }
  const std::size_t n = chain.size();

  // a (below) epsilon-dominates p: metric side only, workload holds for free.
  const auto covers_above = [&](std::size_t a, std::size_t p) {
    return chain[a].metric + epsilon >= chain[p].metric;
  };
  // b (above) epsilon-dominates p: workload side only, metric holds for free.
  const auto covers_below = [&](std::size_t b, std::size_t p) {
    return chain[b].workload_norm - epsilon <= chain[p].workload_norm;
  };
  // Mutual non-domination between members a < b.
  const auto separated = [&](std::size_t a, std::size_t b) {
    return !covers_above(a, b) && !covers_below(b, a);
  };
  const auto covered_between = [&](std::size_t a, std::size_t b) {
    for (std::size_t p = a + 1; p < b; ++p) {
      if (!covers_above(a, p) && !covers_below(b, p)) return false;
    }
    return true;
  };
  const auto head_ok = [&](std::size_t f) { return covers_below(f, 0); };
  const auto tail_ok = [&](std::size_t l) { return covers_above(l, n - 1); };

  // after[i]: members still needed after keeping i; next[i]: the successor
  // realizing it, smallest index first.
  constexpr std::size_t kInf = static_cast<std::size_t>(-1);
  std::vector<std::size_t> after(n, kInf);
  std::vector<std::size_t> next(n, kInf);
  for (std::size_t i = n; i-- > 0;) {
    if (tail_ok(i)) {
      after[i] = 0;
      continue;
    }
    for (std::size_t b = i + 1; b < n; ++b) {
      if (after[b] == kInf || !separated(i, b) || !covered_between(i, b)) continue;
      if (after[i] == kInf || after[b] + 1 < after[i]) {
        after[i] = after[b] + 1;
        next[i] = b;
      }
    }
  }

  std::size_t best_total = kInf;
  for (std::size_t i = 0; i < n; ++i) {
    if (head_ok(i) && after[i] != kInf && after[i] + 1 < best_total) best_total = after[i] + 1;
  }

  std::vector<const RwCell*> kept;
  if (best_total == kInf) {
    // No selection satisfies both invariants together; keep pairwise
    // separation, anchored at the maximum-metric cell.
    std::size_t last = n - 1;
    kept.push_back(chain[last].cell);
    for (std::size_t i = n - 1; i-- > 0;) {
      if (separated(i, last)) {
        kept.push_back(chain[i].cell);
        last = i;
      }
    }
    std::reverse(kept.begin(), kept.end());
    return kept;
  }

  std::size_t cur = kInf;
  for (std::size_t i = 0; i < n; ++i) {
    if (head_ok(i) && after[i] != kInf && after[i] + 1 == best_total) {
      cur = i;
      break;
    }
  }
  kept.push_back(chain[cur].cell);
  while (after[cur] != 0) {
    cur = next[cur];
    kept.push_back(chain[cur].cell);
  }
  return kept;
}

Recommendation recommend_from_cells(std::span<const RwCell> cells, double desired_recall,
                                    Constraint constraint) {
  const RwCell* feasible = nullptr;
  for (const RwCell& cell : cells) {
    if (*cell.metric < desired_recall) continue;
    if (feasible == nullptr || cell.workload < feasible->workload ||
        (cell.workload == feasible->workload && prefer(cell, *feasible))) {
      feasible = &cell;
    }
  }
  if (feasible != nullptr) return {*feasible, Policy::pareto, true, constraint};

  const RwCell* fallback = nullptr;
  for (const RwCell& cell : cells) {
    if (fallback == nullptr || *cell.metric > *fallback->metric ||
        (*cell.metric == *fallback->metric &&
         (cell.workload < fallback->workload ||
          (cell.workload == fallback->workload && prefer(cell, *fallback))))) {
      fallback = &cell;
    }
  }
  return {*fallback, Policy::pareto, false, constraint};
}

}  // namespace

std::string_view to_string(Policy policy) {
  switch (policy) {
    case Policy::pareto: return "pareto";
    case Policy::greedy_max_recall: return "greedy_max_recall";
    case Policy::greedy_min_workload: return "greedy_min_workload";
  }
  return "unknown";
}

bool dominates(const RwCell& a, const RwCell& b, double epsilon, const Rational& max_workload) {
  if (!a.defined() || !b.defined()) throw InvalidArgument("dominance over UNDEFINED cell");
  if (epsilon < 0.0) throw InvalidArgument("epsilon must be non-negative");
  if (epsilon == 0.0) {
    return *a.metric >= *b.metric && a.workload <= b.workload &&
           (*a.metric > *b.metric || a.workload < b.workload);
  }
  if (max_workload.num() <= 0) throw InvalidArgument("normalization workload must be positive");
  const double wa = (a.workload / max_workload).to_double();
  const double wb = (b.workload / max_workload).to_double();
  return *a.metric + epsilon >= *b.metric && wa - epsilon <= wb;
}

ParetoFront pareto_front(const RwMatrix& matrix, double epsilon) {
  if (epsilon < 0.0) throw InvalidArgument("epsilon must be non-negative");
  auto cells = defined_cells(matrix);
  if (cells.empty()) throw InvalidArgument("no defined cells in RW matrix");

  auto members = exact_front(std::move(cells));
  if (epsilon > 0.0) members = epsilon_front(members, epsilon, matrix.max_workload());

  ParetoFront front;
  front.epsilon = epsilon;
  front.cells.reserve(members.size());
  for (const RwCell* cell : members) front.cells.push_back(*cell);
  std::sort(front.cells.begin(), front.cells.end(), [](const RwCell& a, const RwCell& b) {
    if (a.workload != b.workload) return a.workload < b.workload;
    return prefer(a, b);
  });
  return front;
}

Recommendation recommend(const ParetoFront& front, double desired_recall) {
  if (front.cells.empty()) throw InvalidArgument("empty Pareto front");
  return recommend_from_cells(front.cells, desired_recall,
                              Constraint{desired_recall, std::nullopt});
}

Recommendation greedy_max_recall(const RwMatrix& matrix) {
  const auto cells = defined_cells(matrix);
  if (cells.empty()) throw InvalidArgument("no defined cells in RW matrix");
  const RwCell* best = nullptr;
  for (const RwCell* cell : cells) {
    if (best == nullptr || *cell->metric > *best->metric ||
        (*cell->metric == *best->metric &&
         (cell->workload < best->workload ||
          (cell->workload == best->workload && prefer(*cell, *best))))) {
      best = cell;
    }
  }
  return {*best, Policy::greedy_max_recall, true, {}};
}

Recommendation greedy_min_workload(const RwMatrix& matrix) {
  const RwCell* best = nullptr;
  for (const RwCell& cell : matrix.cells) {  // row-major scan; first tie wins
    if (!cell.defined()) continue;
    if (best == nullptr || cell.workload < best->workload) best = &cell;
  }
  if (best == nullptr) throw InvalidArgument("no defined cells in RW matrix");
  return {*best, Policy::greedy_min_workload, true, {}};
}

std::vector<BudgetedPick> budgeted_schedule(const std::vector<RwMatrix>& matrices,
                                            const BudgetConfig& budget, double desired_recall,
                                            double epsilon) {
  if (matrices.empty()) throw InvalidArgument("no matrices to schedule");
  if (budget.total_budget.num() <= 0) throw InvalidArgument("budget must be positive");
  if (budget.horizon_count != matrices.size()) {
    throw InvalidArgument("budget horizon_count does not match the number of matrices");
  }

  const Rational allowance =
      budget.total_budget / Rational(static_cast<std::int64_t>(budget.horizon_count));
  Rational remaining;
  std::vector<BudgetedPick> picks;
  picks.reserve(matrices.size());

  for (const RwMatrix& matrix : matrices) {
    remaining += allowance;
    if (matrix.defined_count() == 0) {
      picks.push_back({std::nullopt, Rational(0), remaining});
      continue;
    }
    const ParetoFront front = pareto_front(matrix, epsilon);
    std::vector<RwCell> affordable;
    for (const RwCell& cell : front.cells) {
      if (cell.workload <= remaining) affordable.push_back(cell);
    }
    if (affordable.empty()) {
      picks.push_back({std::nullopt, Rational(0), remaining});
      continue;
    }
    Recommendation rec = recommend_from_cells(
        affordable, desired_recall, Constraint{desired_recall, remaining});
    const Rational spent = rec.cell.workload;
    remaining -= spent;
    picks.push_back({std::move(rec), spent, remaining});
  }
  return picks;
}

std::string front_to_csv(const RwMatrix& matrix, const ParetoFront& front) {
  std::string out = "k,period_min,metric,workload,on_front\n";
  for (const RwCell& cell : matrix.cells) {
    bool member = false;
    for (const RwCell& f : front.cells) {
      if (f.k == cell.k && f.period == cell.period) {
        member = true;
        break;
      }
    }
    out += std::to_string(cell.k);
    out += ',';
    out += std::to_string(cell.period.minutes);
    out += ',';
    if (cell.defined()) out += shortest_double(*cell.metric);
    out += ',';
    out += cell.workload.str();
    out += ',';
    out += member ? '1' : '0';
    out += '\n';
  }
  return out;
}

std::string recommendation_to_json(const Recommendation& rec) {
  nlohmann::ordered_json j;
  j["k"] = rec.cell.k;
  j["period_min"] = rec.cell.period.minutes;
  j["metric"] = rec.cell.metric ? nlohmann::ordered_json(*rec.cell.metric)
                                : nlohmann::ordered_json(nullptr);
  j["workload"] = rec.cell.workload.to_double();
  j["policy"] = std::string(to_string(rec.policy));
  j["feasible"] = rec.feasible;
  return j.dump();
}

}  // namespace rankload
