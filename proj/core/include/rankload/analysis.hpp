#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rankload/selection.hpp"

namespace rankload {

// One evaluation instant: the matrix over [instant - lookback, instant), its
// Pareto front and the recommendation made from it. The recommendation is
// absent when every cell of the matrix is UNDEFINED.
struct Evaluation {
  Instant instant = 0;
  RwMatrix matrix;
  ParetoFront front;
  std::optional<Recommendation> recommendation;
};

struct SchemeRun {
  SchemeConfig scheme;
  MetricKind metric_kind = MetricKind::recall_at_k;
  double desired_recall = 0.0;
  double epsilon = 0.0;
  // Null for runs reconstructed from exported matrices; required by
  // redundancy_series, which re-ranks the raw horizon.
  std::shared_ptr<const Stream> stream;
  std::vector<Evaluation> evaluations;  // instants strictly increasing
};

// Replays the scheme over the stream: one Evaluation per aligned instant.
// Throws InsufficientData when the stream is shorter than the lookback or
// yields no aligned instant.
SchemeRun run_scheme(std::shared_ptr<const Stream> stream, const SchemeConfig& scheme,
                     MetricKind metric_kind, double desired_recall, double epsilon = 0.0);

enum class ErrorQuantity { recommended_workload, recommended_metric };

// Periodic-vs-realtime difference at each periodic instant, plus the forward
// moving average over the next 5 points (the current one included; shorter at
// the tail). Points with no coinciding realtime evaluation are marked missing
// and excluded from the averages rather than interpolated.
struct ErrorPoint {
  Instant ts = 0;
  std::optional<double> periodic_value;
  std::optional<double> realtime_value;
  std::optional<double> difference;  // periodic - realtime
  std::optional<double> moving_avg;
};

struct ErrorSeries {
  ErrorQuantity quantity = ErrorQuantity::recommended_workload;
  std::vector<ErrorPoint> points;
};

// Recommendations are recomputed from each evaluation's front at the given
// desired recall, so one pair of runs can be compared at any recall level.
ErrorSeries error_series(const SchemeRun& periodic, const SchemeRun& realtime,
                         double desired_recall,
                         ErrorQuantity quantity = ErrorQuantity::recommended_workload);

// Overlap between evaluation s's top-`base_depth` alerts and the union of the
// top-`probe_depth` alerts of evaluations s+1 and s+2, rankings taken over
// each evaluation's full horizon.
struct RedundancyPoint {
  Instant ts = 0;
  double jaccard = 0.0;
  double containment = 0.0;  // always >= jaccard
};

std::vector<RedundancyPoint> redundancy_series(const SchemeRun& run, int base_depth = 50,
                                               int probe_depth = 10);

// Per-cell mean metric across evaluations; UNDEFINED entries are excluded per
// cell, and a cell undefined everywhere stays UNDEFINED. The workload grid is
// data-independent and carried through unchanged.
struct AverageCell {
  int k = 1;
  PeriodLength period{};
  std::optional<double> mean_metric;
  Rational workload;
  double mean_alerts = 0.0;
  std::size_t n_samples = 0;
};

struct AverageRw {
  MetricKind metric_kind = MetricKind::recall_at_k;
  std::vector<int> k_values;
  std::vector<PeriodLength> periods;
  std::vector<AverageCell> cells;
};

AverageRw average_rw(const SchemeRun& run);

// CSV schemas. Error: `ts,periodic_<q>,realtime_<q>,diff,moving_avg` with
// q = workload|metric. Redundancy: `ts,jaccard,containment`. Averages: the
// matrix schema plus an `n_samples` column.
std::string error_series_to_csv(const ErrorSeries& series);
std::string redundancy_to_csv(const std::vector<RedundancyPoint>& series);
std::string averages_to_csv(const AverageRw& averages);

}  // namespace rankload
