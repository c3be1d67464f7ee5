#include "rankload/analysis.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "rankload/errors.hpp"

namespace rankload {

namespace {

std::string shortest_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  (void)ec;
  return std::string(buf, ptr);
}

std::set<std::string> horizon_top_ids(const SchemeRun& run, const Evaluation& eval, int depth) {
  const auto ws = slice(*run.stream, eval.matrix.horizon);
  const auto ranked = rank_top_k(ws, depth);
  return {ranked.entries.begin(), ranked.entries.end()};
}

}  // namespace

SchemeRun run_scheme(std::shared_ptr<const Stream> stream, const SchemeConfig& scheme,
                     MetricKind metric_kind, double desired_recall, double epsilon) {
  if (!stream || stream->empty()) throw InsufficientData("empty stream");
  const auto periods = default_periods();
  scheme.validate(periods.back().minutes);
  if (stream->span_seconds() < scheme.lookback_seconds()) {
    throw InsufficientData("stream shorter than the scheme lookback");
  }
  const auto instants = evaluation_instants(*stream, scheme);
  if (instants.empty()) {
    throw InsufficientData("no aligned evaluation instant inside the stream span");
  }

  SchemeRun run;
  run.scheme = scheme;
  run.metric_kind = metric_kind;
  run.desired_recall = desired_recall;
  run.epsilon = epsilon;
  run.stream = std::move(stream);
  run.evaluations.reserve(instants.size());
  for (const Instant t : instants) {
    Evaluation eval;
    eval.instant = t;
    eval.matrix = build_rw_matrix(*run.stream, {t - scheme.lookback_seconds(), t}, metric_kind);
    if (eval.matrix.defined_count() > 0) {
      eval.front = pareto_front(eval.matrix, epsilon);
      eval.recommendation = recommend(eval.front, desired_recall);
    } else {
      eval.front.epsilon = epsilon;
    }
    run.evaluations.push_back(std::move(eval));
  }
  return run;
}

ErrorSeries error_series(const SchemeRun& periodic, const SchemeRun& realtime,
                         double desired_recall, ErrorQuantity quantity) {
  if (periodic.stream && realtime.stream && periodic.stream != realtime.stream) {
    throw InvalidArgument("error_series requires runs over the same stream");
  }
  const auto value_of = [&](const Evaluation& eval) -> std::optional<double> {
    if (eval.front.cells.empty()) return std::nullopt;
    const Recommendation rec = recommend(eval.front, desired_recall);
    if (quantity == ErrorQuantity::recommended_workload) return rec.cell.workload.to_double();
    return rec.cell.metric;
  };

  ErrorSeries series;
  series.quantity = quantity;
  series.points.reserve(periodic.evaluations.size());
  for (const Evaluation& p : periodic.evaluations) {
    ErrorPoint point;
    point.ts = p.instant;
    point.periodic_value = value_of(p);
    const auto it = std::lower_bound(
        realtime.evaluations.begin(), realtime.evaluations.end(), p.instant,
        [](const Evaluation& e, Instant t) { return e.instant < t; });
    if (it != realtime.evaluations.end() && it->instant == p.instant) {
      point.realtime_value = value_of(*it);
    }
    if (point.periodic_value && point.realtime_value) {
      point.difference = *point.periodic_value - *point.realtime_value;
    }
    series.points.push_back(point);
  }

  const std::size_t n = series.points.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!series.points[i].difference) continue;
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t j = i; j < std::min(i + 5, n); ++j) {
      if (series.points[j].difference) {
        sum += *series.points[j].difference;
        ++count;
      }
    }
    series.points[i].moving_avg = sum / static_cast<double>(count);
  }
  return series;
}

std::vector<RedundancyPoint> redundancy_series(const SchemeRun& run, int base_depth,
                                               int probe_depth) {
  if (!run.stream) throw InvalidArgument("redundancy_series requires a run with its stream");
  if (base_depth < 1 || probe_depth < 1) throw InvalidArgument("depths must be positive");
  if (run.evaluations.size() < 3) {
    throw InsufficientData("redundancy_series requires at least 3 evaluations");
  }

  std::vector<RedundancyPoint> series;
  series.reserve(run.evaluations.size() - 2);
  for (std::size_t s = 0; s + 2 < run.evaluations.size(); ++s) {
    const auto base = horizon_top_ids(run, run.evaluations[s], base_depth);
    auto probe = horizon_top_ids(run, run.evaluations[s + 1], probe_depth);
    probe.merge(horizon_top_ids(run, run.evaluations[s + 2], probe_depth));

    std::size_t inter = 0;
    for (const auto& id : probe) inter += base.count(id);
    const std::size_t uni = probe.size() + base.size() - inter;

    RedundancyPoint point;
    point.ts = run.evaluations[s].instant;
    point.jaccard = uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
    point.containment =
        probe.empty() ? 0.0 : static_cast<double>(inter) / static_cast<double>(probe.size());
    series.push_back(point);
  }
  return series;
}

AverageRw average_rw(const SchemeRun& run) {
  if (run.evaluations.empty()) throw InvalidArgument("empty scheme run");
  const RwMatrix& first = run.evaluations.front().matrix;

  AverageRw avg;
  avg.metric_kind = run.metric_kind;
  avg.k_values = first.k_values;
  avg.periods = first.periods;
  avg.cells.reserve(first.cells.size());

  for (std::size_t c = 0; c < first.cells.size(); ++c) {
    AverageCell cell;
    cell.k = first.cells[c].k;
    cell.period = first.cells[c].period;
    cell.workload = first.cells[c].workload;
    double metric_sum = 0.0;
    double alerts_sum = 0.0;
    std::size_t defined = 0;
    for (const Evaluation& eval : run.evaluations) {
      const RwCell& rc = eval.matrix.cells[c];
      alerts_sum += static_cast<double>(rc.alerts_issued);
      if (rc.defined()) {
        metric_sum += *rc.metric;
        ++defined;
      }
    }
    cell.n_samples = defined;
    if (defined > 0) cell.mean_metric = metric_sum / static_cast<double>(defined);
    cell.mean_alerts = alerts_sum / static_cast<double>(run.evaluations.size());
    avg.cells.push_back(cell);
  }
  return avg;
}

std::string error_series_to_csv(const ErrorSeries& series) {
  const bool workload = series.quantity == ErrorQuantity::recommended_workload;
  std::string out = workload ? "ts,periodic_workload,realtime_workload,diff,moving_avg\n"
                             : "ts,periodic_metric,realtime_metric,diff,moving_avg\n";
  for (const ErrorPoint& p : series.points) {
    out += format_rfc3339(p.ts);
    out += ',';
    if (p.periodic_value) out += shortest_double(*p.periodic_value);
    out += ',';
    if (p.realtime_value) out += shortest_double(*p.realtime_value);
    out += ',';
    if (p.difference) out += shortest_double(*p.difference);
    out += ',';
    if (p.moving_avg) out += shortest_double(*p.moving_avg);
    out += '\n';
  }
  return out;
}

std::string redundancy_to_csv(const std::vector<RedundancyPoint>& series) {
  std::string out = "ts,jaccard,containment\n";
  for (const RedundancyPoint& p : series) {
    out += format_rfc3339(p.ts);
    out += ',';
    out += shortest_double(p.jaccard);
    out += ',';
    out += shortest_double(p.containment);
    out += '\n';
  }
  return out;
}

std::string averages_to_csv(const AverageRw& averages) {
  std::string out = "k,period_min,metric,workload,alerts_issued,n_samples\n";
  for (const AverageCell& cell : averages.cells) {
    out += std::to_string(cell.k);
    out += ',';
    out += std::to_string(cell.period.minutes);
    out += ',';
    if (cell.mean_metric) out += shortest_double(*cell.mean_metric);
    out += ',';
    out += cell.workload.str();
    out += ',';
    out += shortest_double(cell.mean_alerts);
    out += ',';
    out += std::to_string(cell.n_samples);
    out += '\n';
  }
  return out;
}

}  // namespace rankload
