#include <doctest.h>

#include <memory>
#include <set>

#include "rankload/analysis.hpp"
#include "rankload/errors.hpp"
#include "support/helpers.hpp"
#include "support/oracles.hpp"

using namespace rankload;
using rankload::test::msg;

namespace {

constexpr Instant kT0 = kDefaultSynthStart;

std::shared_ptr<const Stream> shared(Stream s) {
  return std::make_shared<const Stream>(std::move(s));
}

// Run with one single-cell matrix per instant, workload chosen per instant.
// Lets error-series tests pin recommended workloads exactly.
SchemeRun synthetic_run(const std::vector<Instant>& instants,
                        const std::vector<Rational>& workloads) {
  SchemeRun run;
  run.scheme = SchemeConfig::periodic();
  for (std::size_t i = 0; i < instants.size(); ++i) {
    RwMatrix m;
    m.evaluated_at = instants[i];
    m.horizon = {instants[i] - 3600, instants[i]};
    // Pick (k, period) realizing the requested workload k * 60 / p.
    const Rational w = workloads[i];
    RwCell cell;
    if (w == Rational(12)) {
      cell.k = 2;
      cell.period = {10};
    } else if (w == Rational(6)) {
      cell.k = 1;
      cell.period = {10};
    } else {
      cell.k = 1;
      cell.period = {60};
    }
    cell.workload = workload(cell.k, cell.period);
    REQUIRE(cell.workload == w);
    cell.metric = 0.5;
    m.k_values = {cell.k};
    m.periods = {cell.period};
    m.cells = {cell};

    Evaluation eval;
    eval.instant = instants[i];
    eval.matrix = std::move(m);
    eval.front = pareto_front(eval.matrix, 0.0);
    eval.recommendation = recommend(eval.front, 0.5);
    run.evaluations.push_back(std::move(eval));
  }
  return run;
}

}  // namespace

TEST_CASE("run_scheme evaluates once per aligned instant") {
  // 25 h span: periodic instants at hours 24 and 25.
  auto day_stream = shared(Stream::create({
      msg("first", kT0, 0.5, true),
      msg("mid", kT0 + 12 * 3600 + 300, 0.8, false),
      msg("last", kT0 + 25 * 3600, 0.6, true),
  }));
  const SchemeRun periodic =
      run_scheme(day_stream, SchemeConfig::periodic(), MetricKind::recall_at_k, 0.6);
  REQUIRE(periodic.evaluations.size() == 2);
  CHECK(periodic.evaluations[0].instant == kT0 + 24 * 3600);
  CHECK(periodic.evaluations[1].instant == kT0 + 25 * 3600);
  CHECK(periodic.evaluations[0].matrix.horizon.start == kT0);
  for (const Evaluation& eval : periodic.evaluations) {
    CHECK(eval.matrix.cells.size() == 60);
  }

  // 61 min span: realtime instants at minutes 60 and 61.
  auto hour_stream = shared(Stream::create({
      msg("first", kT0, 0.5, true),
      msg("last", kT0 + 61 * 60, 0.6, true),
  }));
  const SchemeRun realtime =
      run_scheme(hour_stream, SchemeConfig::realtime(), MetricKind::recall_at_k, 0.6);
  REQUIRE(realtime.evaluations.size() == 2);
  CHECK(realtime.evaluations[0].instant == kT0 + 3600);
}

TEST_CASE("run_scheme refuses streams shorter than the lookback") {
  auto tiny = shared(Stream::create({
      msg("a", kT0, 0.5, true),
      msg("b", kT0 + 600, 0.6, true),
  }));
  CHECK_THROWS_AS(run_scheme(tiny, SchemeConfig::periodic(), MetricKind::recall_at_k, 0.6),
                  InsufficientData);
  CHECK_THROWS_AS(run_scheme(nullptr, SchemeConfig::periodic(), MetricKind::recall_at_k, 0.6),
                  InsufficientData);
}

TEST_CASE("error series is identically zero when horizons coincide") {
  auto stream = shared(rankload::test::random_stream(42, kT0, 180, 1.5));
  SchemeConfig hourly{SchemeMode::periodic, 60, 60};
  const SchemeRun periodic = run_scheme(stream, hourly, MetricKind::recall_at_k, 0.6);
  const SchemeRun realtime =
      run_scheme(stream, SchemeConfig::realtime(), MetricKind::recall_at_k, 0.6);
  const ErrorSeries series = error_series(periodic, realtime, 0.6);
  REQUIRE(!series.points.empty());
  for (const ErrorPoint& point : series.points) {
    REQUIRE(point.difference.has_value());
    CHECK(*point.difference == 0.0);
    CHECK(*point.moving_avg == 0.0);
  }
}

TEST_CASE("moving average runs over the next five differences") {
  std::vector<Instant> instants;
  for (int i = 0; i < 5; ++i) instants.push_back(kT0 + 24 * 3600 + i * 3600);
  const SchemeRun periodic =
      synthetic_run(instants, {Rational(12), Rational(6), Rational(6), Rational(6), Rational(6)});
  const SchemeRun realtime =
      synthetic_run(instants, {Rational(6), Rational(6), Rational(6), Rational(6), Rational(6)});
  const ErrorSeries series = error_series(periodic, realtime, 0.0);
  REQUIRE(series.points.size() == 5);
  // Differences are [6, 0, 0, 0, 0]; the leading window averages 1.2.
  CHECK(*series.points[0].difference == 6.0);
  CHECK(*series.points[0].moving_avg == doctest::Approx(1.2));
  CHECK(*series.points[1].moving_avg == doctest::Approx(0.0));
  CHECK(*series.points[4].moving_avg == doctest::Approx(0.0));  // tail window of one
}

TEST_CASE("missing realtime instants are excluded, not interpolated") {
  std::vector<Instant> instants;
  for (int i = 0; i < 5; ++i) instants.push_back(kT0 + 24 * 3600 + i * 3600);
  const SchemeRun periodic =
      synthetic_run(instants, {Rational(12), Rational(6), Rational(6), Rational(6), Rational(6)});
  std::vector<Instant> gapped = {instants[0], instants[1], instants[3], instants[4]};
  const SchemeRun realtime =
      synthetic_run(gapped, {Rational(6), Rational(6), Rational(6), Rational(6)});
  const ErrorSeries series = error_series(periodic, realtime, 0.0);
  REQUIRE(series.points.size() == 5);
  CHECK(!series.points[2].realtime_value.has_value());
  CHECK(!series.points[2].difference.has_value());
  CHECK(!series.points[2].moving_avg.has_value());
  // Window 0..4 with position 2 absent: (6 + 0 + 0 + 0) / 4.
  CHECK(*series.points[0].moving_avg == doctest::Approx(1.5));
}

TEST_CASE("redundancy of a stationary block of messages") {
  std::vector<Message> messages = {msg("first", kT0, 0.9, true)};
  for (int i = 0; i < 5; ++i) {
    messages.push_back(msg("mid" + std::to_string(i), kT0 + (30 + i) * 60, 0.5 + 0.01 * i, true));
  }
  messages.push_back(msg("last", kT0 + 62 * 60, 0.2, false));
  auto stream = shared(Stream::create(std::move(messages)));
  const SchemeRun run =
      run_scheme(stream, SchemeConfig::realtime(), MetricKind::recall_at_k, 0.6);
  REQUIRE(run.evaluations.size() == 3);  // minutes 60, 61, 62
  const auto series = redundancy_series(run);
  REQUIRE(series.size() == 1);
  // Base horizon holds {first, mid0..mid4}; both probe horizons hold the five
  // mid messages only.
  CHECK(series[0].jaccard == doctest::Approx(5.0 / 6.0));
  CHECK(series[0].containment == doctest::Approx(1.0));
  CHECK(series[0].ts == kT0 + 3600);
}

TEST_CASE("redundancy series matches an oracle recomputation") {
  auto stream = shared(rankload::test::random_stream(9, kT0, 75, 2.5));
  const SchemeRun run =
      run_scheme(stream, SchemeConfig::realtime(), MetricKind::recall_at_k, 0.6);
  REQUIRE(run.evaluations.size() >= 3);
  const auto series = redundancy_series(run, 50, 10);
  REQUIRE(series.size() == run.evaluations.size() - 2);
  for (std::size_t s = 0; s < series.size(); ++s) {
    const auto ids_at = [&](std::size_t e, int depth) {
      const TimeWindow h = run.evaluations[e].matrix.horizon;
      const auto ranked =
          rankload::test::oracle_top_k(rankload::test::messages_in(*stream, h.start, h.end), depth);
      return std::set<std::string>(ranked.begin(), ranked.end());
    };
    auto probe = ids_at(s + 1, 10);
    const auto next = ids_at(s + 2, 10);
    probe.insert(next.begin(), next.end());
    const auto base = ids_at(s, 50);
    std::size_t inter = 0;
    for (const auto& id : probe) inter += base.count(id);
    const double expected_j =
        probe.empty() && base.empty()
            ? 0.0
            : static_cast<double>(inter) / static_cast<double>(probe.size() + base.size() - inter);
    CHECK(series[s].jaccard == doctest::Approx(expected_j));
    CHECK(series[s].containment >= series[s].jaccard);
    CHECK(series[s].jaccard >= 0.0);
    CHECK(series[s].containment <= 1.0);
  }
}

TEST_CASE("redundancy needs at least three evaluations") {
  auto stream = shared(Stream::create({
      msg("a", kT0, 0.5, true),
      msg("b", kT0 + 3600, 0.6, true),
  }));
  const SchemeRun run =
      run_scheme(stream, SchemeConfig::realtime(), MetricKind::recall_at_k, 0.6);
  CHECK_THROWS_AS(redundancy_series(run), InsufficientData);
}

TEST_CASE("average of a single evaluation is that matrix") {
  auto messages = rankload::test::random_stream(13, kT0, 60, 2.0).messages();
  messages.push_back(msg("zfirst", kT0, 0.5, true));
  messages.push_back(msg("zlast", kT0 + 3600, 0.6, true));
  auto stream = shared(Stream::create(std::move(messages)));
  SchemeConfig hourly{SchemeMode::periodic, 60, 60};
  const SchemeRun run = run_scheme(stream, hourly, MetricKind::recall_at_k, 0.6);
  REQUIRE(run.evaluations.size() == 1);
  const AverageRw avg = average_rw(run);
  REQUIRE(avg.cells.size() == 60);
  for (std::size_t i = 0; i < avg.cells.size(); ++i) {
    const RwCell& cell = run.evaluations[0].matrix.cells[i];
    CHECK(avg.cells[i].mean_metric == cell.metric);
    CHECK(avg.cells[i].workload == cell.workload);
    CHECK(avg.cells[i].n_samples == (cell.defined() ? 1u : 0u));
    CHECK(avg.cells[i].mean_alerts == doctest::Approx(static_cast<double>(cell.alerts_issued)));
  }
}

TEST_CASE("averages skip UNDEFINED entries per cell") {
  SchemeRun run;
  run.scheme = SchemeConfig::periodic();
  for (const double metric : {0.2, 0.4}) {
    RwMatrix m;
    m.k_values = {1};
    m.periods = {{60}};
    RwCell cell;
    cell.k = 1;
    cell.period = {60};
    cell.workload = Rational(1);
    cell.metric = metric;
    m.cells = {cell};
    Evaluation eval;
    eval.instant = kT0 + run.evaluations.size() * 3600;
    eval.matrix = std::move(m);
    run.evaluations.push_back(std::move(eval));
  }
  AverageRw avg = average_rw(run);
  CHECK(*avg.cells[0].mean_metric == doctest::Approx(0.3));
  CHECK(avg.cells[0].n_samples == 2);

  run.evaluations[1].matrix.cells[0].metric.reset();
  avg = average_rw(run);
  CHECK(*avg.cells[0].mean_metric == doctest::Approx(0.2));
  CHECK(avg.cells[0].n_samples == 1);

  run.evaluations[0].matrix.cells[0].metric.reset();
  avg = average_rw(run);
  CHECK(!avg.cells[0].mean_metric.has_value());
  CHECK(avg.cells[0].n_samples == 0);
}

TEST_CASE("run averages match an independent mean over stored matrices") {
  auto messages = rankload::test::random_stream(21, kT0, 26 * 60, 1.0).messages();
  messages.push_back(msg("zfirst", kT0, 0.5, true));
  messages.push_back(msg("zlast", kT0 + 26 * 3600, 0.6, true));
  auto stream = shared(Stream::create(std::move(messages)));
  const SchemeRun run =
      run_scheme(stream, SchemeConfig::periodic(), MetricKind::recall_at_k, 0.6);
  REQUIRE(run.evaluations.size() >= 2);
  const AverageRw avg = average_rw(run);
  for (std::size_t i = 0; i < avg.cells.size(); ++i) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const Evaluation& eval : run.evaluations) {
      if (eval.matrix.cells[i].defined()) {
        sum += *eval.matrix.cells[i].metric;
        ++n;
      }
    }
    if (n == 0) {
      CHECK(!avg.cells[i].mean_metric.has_value());
    } else {
      CHECK(*avg.cells[i].mean_metric == doctest::Approx(sum / static_cast<double>(n)));
    }
    CHECK(avg.cells[i].workload == run.evaluations[0].matrix.cells[i].workload);
  }
}

TEST_CASE("series CSV emitters produce the documented headers") {
  std::vector<Instant> instants = {kT0 + 24 * 3600, kT0 + 25 * 3600, kT0 + 26 * 3600};
  const SchemeRun run = synthetic_run(instants, {Rational(6), Rational(6), Rational(6)});
  const ErrorSeries series = error_series(run, run, 0.0);
  CHECK(error_series_to_csv(series).rfind("ts,periodic_workload,realtime_workload,diff,moving_avg\n",
                                          0) == 0);
  ErrorSeries metric_series = error_series(run, run, 0.0, ErrorQuantity::recommended_metric);
  CHECK(error_series_to_csv(metric_series)
            .rfind("ts,periodic_metric,realtime_metric,diff,moving_avg\n", 0) == 0);
  CHECK(redundancy_to_csv({{kT0, 0.5, 0.75}}) ==
        "ts,jaccard,containment\n2020-01-01T00:00:00Z,0.5,0.75\n");
  const AverageRw avg = average_rw(run);
  CHECK(averages_to_csv(avg).rfind("k,period_min,metric,workload,alerts_issued,n_samples\n", 0) ==
        0);
}
