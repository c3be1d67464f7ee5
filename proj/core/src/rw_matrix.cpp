#include "rankload/rw_matrix.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "rankload/errors.hpp"

namespace rankload {

namespace {

std::string shortest_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  (void)ec;
  return std::string(buf, ptr);
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string field;
  for (const char c : line) {
    if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

}  // namespace

const RwCell* RwMatrix::find(int k, std::int32_t period_minutes) const {
  for (const RwCell& cell : cells) {
    if (cell.k == k && cell.period.minutes == period_minutes) return &cell;
  }
  return nullptr;
}

Rational RwMatrix::max_workload() const {
  Rational best;
  for (const RwCell& cell : cells) {
    if (cell.workload > best) best = cell.workload;
  }
  return best;
}

std::size_t RwMatrix::defined_count() const {
  std::size_t n = 0;
  for (const RwCell& cell : cells) n += cell.defined() ? 1 : 0;
  return n;
}

std::vector<int> default_k_values() {
  return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
}

std::vector<PeriodLength> default_periods() {
  return {{10}, {20}, {30}, {40}, {50}, {60}};
}

Rational workload(int k, PeriodLength period, int horizon_minutes) {
  if (k < 1) throw InvalidArgument("k must be positive");
  if (period.minutes < 1) throw InvalidArgument("period must be positive");
  if (horizon_minutes < 1) throw InvalidArgument("workload horizon must be positive");
  if (period.minutes > horizon_minutes) {
    throw InvalidArgument("period exceeds the workload horizon");
  }
  return Rational(static_cast<std::int64_t>(k) * horizon_minutes, period.minutes);
}

RwMatrix build_rw_matrix(const Stream& stream, TimeWindow horizon, MetricKind kind,
                         const std::vector<int>& k_values,
                         const std::vector<PeriodLength>& periods) {
  if (k_values.empty() || periods.empty()) throw InvalidArgument("empty RW grid");

  RwMatrix m;
  m.evaluated_at = horizon.end;
  m.horizon = horizon;
  m.metric_kind = kind;
  m.k_values = k_values;
  m.periods = periods;
  std::sort(m.k_values.begin(), m.k_values.end());
  m.k_values.erase(std::unique(m.k_values.begin(), m.k_values.end()), m.k_values.end());
  std::sort(m.periods.begin(), m.periods.end());
  m.periods.erase(std::unique(m.periods.begin(), m.periods.end()), m.periods.end());

  m.cells.reserve(m.k_values.size() * m.periods.size());
  for (const int k : m.k_values) {
    for (const PeriodLength p : m.periods) {
      RwCell cell;
      cell.k = k;
      cell.period = p;
      cell.workload = workload(k, p);
      cell.metric = horizon_metric(stream, horizon, k, p, kind);
      cell.alerts_issued = alert_set_indices(stream, horizon, k, p).size();
      m.cells.push_back(std::move(cell));
    }
  }
  return m;
}

RwMatrix build_rw_matrix(const Stream& stream, TimeWindow horizon, MetricKind kind) {
  return build_rw_matrix(stream, horizon, kind, default_k_values(), default_periods());
}

std::vector<BudgetPoint> budget_frontier(const RwMatrix& matrix) {
  std::set<Rational> budgets;
  for (const RwCell& cell : matrix.cells) budgets.insert(cell.workload);

  std::vector<BudgetPoint> frontier;
  for (const Rational& budget : budgets) {
    double best = -1.0;
    for (const RwCell& cell : matrix.cells) {
      if (cell.defined() && cell.workload <= budget && *cell.metric > best) {
        best = *cell.metric;
      }
    }
    if (best >= 0.0) frontier.push_back({budget, best});
  }
  return frontier;
}

std::string matrix_to_csv(const RwMatrix& matrix) {
  std::string out = "k,period_min,metric,workload,alerts_issued\n";
  for (const RwCell& cell : matrix.cells) {
    out += std::to_string(cell.k);
    out += ',';
    out += std::to_string(cell.period.minutes);
    out += ',';
    if (cell.defined()) out += shortest_double(*cell.metric);
    out += ',';
    out += cell.workload.str();
    out += ',';
    out += std::to_string(cell.alerts_issued);
    out += '\n';
  }
  return out;
}

RwMatrix matrix_from_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty matrix CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "k,period_min,metric,workload,alerts_issued") {
    throw ParseError("wrong matrix CSV header");
  }

  std::map<std::pair<int, std::int32_t>, RwCell> by_key;
  std::set<int> ks;
  std::set<std::int32_t> ps;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 5) {
      throw ParseError("matrix CSV line " + std::to_string(line_no) + ": expected 5 fields");
    }
    RwCell cell;
    try {
      cell.k = std::stoi(fields[0]);
      cell.period.minutes = std::stoi(fields[1]);
      cell.alerts_issued = static_cast<std::size_t>(std::stoull(fields[4]));
    } catch (const std::exception&) {
      throw ParseError("matrix CSV line " + std::to_string(line_no) + ": bad integer field");
    }
    if (cell.k < 1 || cell.period.minutes < 1) {
      throw ParseError("matrix CSV line " + std::to_string(line_no) + ": non-positive k or period");
    }
    if (!fields[2].empty()) {
      double value = 0.0;
      const auto* begin = fields[2].data();
      const auto [ptr, ec] = std::from_chars(begin, begin + fields[2].size(), value);
      if (ec != std::errc{} || ptr != begin + fields[2].size() || !std::isfinite(value) ||
          value < 0.0 || value > 1.0) {
        throw ParseError("matrix CSV line " + std::to_string(line_no) + ": metric out of range");
      }
      cell.metric = value;
    }
    const auto w = Rational::parse(fields[3]);
    if (!w || w->num() <= 0) {
      throw ParseError("matrix CSV line " + std::to_string(line_no) + ": bad workload");
    }
    cell.workload = *w;
    const auto key = std::make_pair(cell.k, cell.period.minutes);
    if (!by_key.emplace(key, std::move(cell)).second) {
      throw ParseError("matrix CSV line " + std::to_string(line_no) + ": duplicate (k, period)");
    }
    ks.insert(key.first);
    ps.insert(key.second);
  }
  if (by_key.empty()) throw ParseError("matrix CSV has no data rows");
  if (by_key.size() != ks.size() * ps.size()) {
    throw ParseError("incomplete RW matrix grid: " + std::to_string(by_key.size()) + " cells for " +
                     std::to_string(ks.size()) + " x " + std::to_string(ps.size()) + " grid");
  }

  RwMatrix m;
  m.k_values.assign(ks.begin(), ks.end());
  for (const auto p : ps) m.periods.push_back({p});
  for (const int k : m.k_values) {
    for (const PeriodLength p : m.periods) {
      m.cells.push_back(by_key.at({k, p.minutes}));
    }
  }
  return m;
}

std::string frontier_to_csv(const std::vector<BudgetPoint>& frontier) {
  std::string out = "budget,best_metric\n";
  for (const BudgetPoint& point : frontier) {
    out += point.budget.str();
    out += ',';
    out += shortest_double(point.best_metric);
    out += '\n';
  }
  return out;
}

}  // namespace rankload
