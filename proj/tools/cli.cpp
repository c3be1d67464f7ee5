#include "cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "manifest.hpp"
#include "rankload/analysis.hpp"
#include "rankload/digest.hpp"
#include "rankload/errors.hpp"
#include "rankload/stream_io.hpp"
#include "rankload/synth.hpp"

namespace rankload::cli {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::string join_command(int argc, const char* const* argv) {
  std::string cmd;
  for (int i = 0; i < argc; ++i) {
    if (i) cmd += ' ';
    cmd += argv[i];
  }
  return cmd;
}

Instant parse_instant_or_throw(const std::string& text, const std::string& flag) {
  const auto t = parse_instant(text);
  if (!t) throw InvalidArgument("invalid timestamp for " + flag + ": \"" + text + "\"");
  return *t;
}

MetricKind metric_or_throw(const std::string& name) {
  const auto kind = metric_from_string(name);
  if (!kind) throw InvalidArgument("unknown metric \"" + name + "\"");
  return *kind;
}

std::string index_name(const char* prefix, std::size_t idx) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%s%05zu.csv", prefix, idx);
  return buf;
}

struct SynthOptions {
  std::uint64_t seed = 1;
  std::int64_t minutes = 1440;
  double rate = 2.0;
  double prob = 0.3;
  double mu1 = 1.0;
  double mu0 = 0.0;
  double sigma = 0.5;
  std::string start = "2020-01-01T00:00:00Z";
  std::string out;
};

int run_synth(const SynthOptions& opt, const std::string& command) {
  SynthConfig config;
  config.seed = opt.seed;
  if (const char* env = std::getenv("RANKLOAD_SEED")) {
    try {
      config.seed = std::stoull(env);
    } catch (const std::exception&) {
      throw InvalidArgument("RANKLOAD_SEED is not an unsigned integer");
    }
  }
  config.duration_minutes = opt.minutes;
  config.arrival_rate = opt.rate;
  config.relevance_prob = opt.prob;
  config.scores = {opt.mu1, opt.mu0, opt.sigma};
  config.start = parse_instant_or_throw(opt.start, "--start");
  config.validate();

  const Stream stream = generate_stream(config);
  const fs::path out_path(opt.out);
  const StreamFormat format = format_from_path(out_path).value_or(StreamFormat::jsonl);
  write_file_atomic(out_path, serialize_stream(stream, format));

  RunManifest manifest;
  manifest.command = command;
  manifest.config = {{"seed", config.seed},
                     {"minutes", config.duration_minutes},
                     {"rate", config.arrival_rate},
                     {"prob", config.relevance_prob},
                     {"mu1", config.scores.mu_relevant},
                     {"mu0", config.scores.mu_irrelevant},
                     {"sigma", config.scores.sigma},
                     {"start", format_rfc3339(config.start)}};
  manifest.input_digest = content_digest(manifest.config.dump());
  manifest.seed = config.seed;
  manifest.outputs = {out_path.filename().string()};
  manifest.write(out_path.string() + ".manifest.json");
  return kExitOk;
}

struct MatrixOptions {
  std::string input;
  std::string at;
  std::int64_t lookback_minutes = 24 * 60;
  std::string metric = "recall_at_k";
  std::string out;
};

int run_matrix(const MatrixOptions& opt, const std::string& command) {
  const std::string bytes = read_file(opt.input);
  const fs::path input_path(opt.input);
  const Stream stream =
      load_stream(bytes, format_from_path(input_path).value_or(StreamFormat::jsonl));
  if (stream.empty()) throw InsufficientData("input stream is empty");

  const Instant at = parse_instant_or_throw(opt.at, "--at");
  if (opt.lookback_minutes < 1) throw InvalidArgument("--lookback must be positive");
  const Instant from = at - opt.lookback_minutes * kSecondsPerMinute;
  if (from < stream.span_start() || from > stream.span_end()) {
    throw InsufficientData("evaluation instant minus lookback falls outside the stream span");
  }

  const RwMatrix matrix = build_rw_matrix(stream, {from, at}, metric_or_throw(opt.metric));
  const fs::path out_path(opt.out);
  write_file_atomic(out_path, matrix_to_csv(matrix));

  RunManifest manifest;
  manifest.command = command;
  manifest.config = {{"input", input_path.filename().string()},
                     {"at", format_rfc3339(at)},
                     {"lookback", opt.lookback_minutes},
                     {"metric", opt.metric}};
  manifest.input_digest = content_digest(bytes);
  manifest.outputs = {out_path.filename().string()};
  manifest.write(out_path.string() + ".manifest.json");
  return kExitOk;
}

struct ReplayOptions {
  std::string input;
  std::string scheme = "periodic";
  std::string metric = "recall_at_k";
  double desired_recall = 0.6;
  double epsilon = 0.0;
  std::string budget;  // optional rational
  std::string out_dir;
};

int run_replay(const ReplayOptions& opt, const std::string& command) {
  const std::string bytes = read_file(opt.input);
  const fs::path input_path(opt.input);
  auto stream = std::make_shared<const Stream>(
      load_stream(bytes, format_from_path(input_path).value_or(StreamFormat::jsonl)));

  const SchemeConfig scheme =
      opt.scheme == "realtime" ? SchemeConfig::realtime() : SchemeConfig::periodic();
  SchemeRun run =
      run_scheme(stream, scheme, metric_or_throw(opt.metric), opt.desired_recall, opt.epsilon);

  std::optional<Rational> total_budget;
  std::vector<BudgetedPick> picks;
  if (!opt.budget.empty()) {
    const auto b = Rational::parse(opt.budget);
    if (!b || b->num() <= 0) throw InvalidArgument("--budget must be a positive number");
    total_budget = *b;
    std::vector<RwMatrix> matrices;
    matrices.reserve(run.evaluations.size());
    for (const Evaluation& eval : run.evaluations) matrices.push_back(eval.matrix);
    picks = budgeted_schedule(matrices, {*total_budget, matrices.size()}, opt.desired_recall,
                              opt.epsilon);
  }

  const fs::path dir(opt.out_dir);
  fs::create_directories(dir);

  RunManifest manifest;
  manifest.command = command;
  manifest.config = {{"input", input_path.filename().string()},
                     {"scheme", opt.scheme},
                     {"metric", opt.metric},
                     {"desired_recall", opt.desired_recall},
                     {"epsilon", opt.epsilon},
                     {"budget", opt.budget.empty() ? ordered_json(nullptr) : ordered_json(opt.budget)},
                     {"lookback", scheme.lookback_minutes},
                     {"cadence", scheme.cadence_minutes}};
  manifest.input_digest = content_digest(bytes);

  std::string index_csv = "idx,ts\n";
  std::string recommendations;
  for (std::size_t i = 0; i < run.evaluations.size(); ++i) {
    const Evaluation& eval = run.evaluations[i];
    const std::size_t idx = i + 1;
    index_csv += std::to_string(idx);
    index_csv += ',';
    index_csv += format_rfc3339(eval.instant);
    index_csv += '\n';

    const std::string matrix_name = index_name("matrix_", idx);
    const std::string front_name = index_name("front_", idx);
    write_file_atomic(dir / matrix_name, matrix_to_csv(eval.matrix));
    write_file_atomic(dir / front_name, front_to_csv(eval.matrix, eval.front));
    manifest.outputs.push_back(matrix_name);
    manifest.outputs.push_back(front_name);

    ordered_json line;
    line["ts"] = format_rfc3339(eval.instant);
    const std::optional<Recommendation>* rec = &eval.recommendation;
    if (total_budget) rec = &picks[i].recommendation;
    if (*rec) {
      const ordered_json body = ordered_json::parse(recommendation_to_json(**rec));
      for (const auto& [key, value] : body.items()) line[key] = value;
    } else {
      line["skipped"] = true;
    }
    if (total_budget) line["remaining_budget"] = picks[i].remaining_after.to_double();
    recommendations += line.dump();
    recommendations += '\n';
  }
  write_file_atomic(dir / "evaluations.csv", index_csv);
  write_file_atomic(dir / "recommendations.jsonl", recommendations);
  manifest.outputs.push_back("evaluations.csv");
  manifest.outputs.push_back("recommendations.jsonl");
  manifest.outputs.push_back("manifest.json");
  manifest.write(dir / "manifest.json");
  return kExitOk;
}

// Rebuilds the evaluations of an exported replay directory from its CSVs;
// fronts are recomputed from the stored matrices at the run's epsilon.
SchemeRun load_replay_dir(const fs::path& dir, const RunManifest& manifest) {
  SchemeRun run;
  const std::string scheme = manifest.config.value("scheme", "periodic");
  run.scheme = scheme == "realtime" ? SchemeConfig::realtime() : SchemeConfig::periodic();
  run.desired_recall = manifest.config.value("desired_recall", 0.0);
  run.epsilon = manifest.config.value("epsilon", 0.0);

  std::istringstream index(read_file(dir / "evaluations.csv"));
  std::string line;
  if (!std::getline(index, line) || (line != "idx,ts" && line != "idx,ts\r")) {
    throw ParseError("missing evaluations.csv header in \"" + dir.string() + "\"");
  }
  while (std::getline(index, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ParseError("malformed evaluations.csv row");
    const std::size_t idx = std::stoull(line.substr(0, comma));
    const auto ts = parse_instant(line.substr(comma + 1));
    if (!ts) throw ParseError("malformed timestamp in evaluations.csv");

    Evaluation eval;
    eval.instant = *ts;
    eval.matrix = matrix_from_csv(read_file(dir / index_name("matrix_", idx)));
    eval.matrix.evaluated_at = *ts;
    eval.matrix.horizon = {*ts - run.scheme.lookback_seconds(), *ts};
    if (eval.matrix.defined_count() > 0) {
      eval.front = pareto_front(eval.matrix, run.epsilon);
      eval.recommendation = recommend(eval.front, run.desired_recall);
    } else {
      eval.front.epsilon = run.epsilon;
    }
    run.evaluations.push_back(std::move(eval));
  }
  return run;
}

struct AnalyzeErrorOptions {
  std::string periodic_dir;
  std::string realtime_dir;
  double desired_recall = 0.6;
  std::string out;
};

int run_analyze_error(const AnalyzeErrorOptions& opt, const std::string& command) {
  const RunManifest periodic_manifest = RunManifest::read(fs::path(opt.periodic_dir) / "manifest.json");
  const RunManifest realtime_manifest = RunManifest::read(fs::path(opt.realtime_dir) / "manifest.json");
  if (periodic_manifest.input_digest != realtime_manifest.input_digest) {
    throw InvalidArgument("refusing to compare runs with different input digests (" +
                          periodic_manifest.input_digest + " vs " +
                          realtime_manifest.input_digest + ")");
  }
  if (periodic_manifest.config.value("scheme", "") != "periodic" ||
      realtime_manifest.config.value("scheme", "") != "realtime") {
    throw InvalidArgument("--periodic/--realtime directories must hold replays of those schemes");
  }

  const SchemeRun periodic = load_replay_dir(opt.periodic_dir, periodic_manifest);
  const SchemeRun realtime = load_replay_dir(opt.realtime_dir, realtime_manifest);

  const ErrorSeries workload_series =
      error_series(periodic, realtime, opt.desired_recall, ErrorQuantity::recommended_workload);
  const ErrorSeries metric_series =
      error_series(periodic, realtime, opt.desired_recall, ErrorQuantity::recommended_metric);

  const fs::path out_path(opt.out);
  fs::path metric_path = out_path;
  metric_path.replace_extension();
  metric_path += ".metric";
  metric_path += out_path.extension();

  write_file_atomic(out_path, error_series_to_csv(workload_series));
  write_file_atomic(metric_path, error_series_to_csv(metric_series));

  RunManifest manifest;
  manifest.command = command;
  manifest.config = {{"periodic", opt.periodic_dir},
                     {"realtime", opt.realtime_dir},
                     {"desired_recall", opt.desired_recall}};
  manifest.input_digest = periodic_manifest.input_digest;
  manifest.outputs = {out_path.filename().string(), metric_path.filename().string()};
  manifest.write(out_path.string() + ".manifest.json");
  return kExitOk;
}

struct AnalyzeStreamOptions {
  std::string input;
  std::string scheme = "periodic";
  std::string metric = "recall_at_k";
  int base_depth = 50;
  int probe_depth = 10;
  std::string out;
};

int run_analyze_redundancy(const AnalyzeStreamOptions& opt, const std::string& command) {
  const std::string bytes = read_file(opt.input);
  auto stream = std::make_shared<const Stream>(
      load_stream(bytes, format_from_path(fs::path(opt.input)).value_or(StreamFormat::jsonl)));
  const SchemeConfig scheme =
      opt.scheme == "realtime" ? SchemeConfig::realtime() : SchemeConfig::periodic();
  const SchemeRun run = run_scheme(stream, scheme, metric_or_throw(opt.metric), 0.0, 0.0);
  const auto series = redundancy_series(run, opt.base_depth, opt.probe_depth);

  const fs::path out_path(opt.out);
  write_file_atomic(out_path, redundancy_to_csv(series));

  RunManifest manifest;
  manifest.command = command;
  manifest.config = {{"input", fs::path(opt.input).filename().string()},
                     {"scheme", opt.scheme},
                     {"base_depth", opt.base_depth},
                     {"probe_depth", opt.probe_depth}};
  manifest.input_digest = content_digest(bytes);
  manifest.outputs = {out_path.filename().string()};
  manifest.write(out_path.string() + ".manifest.json");
  return kExitOk;
}

int run_analyze_averages(const AnalyzeStreamOptions& opt, const std::string& command) {
  const std::string bytes = read_file(opt.input);
  auto stream = std::make_shared<const Stream>(
      load_stream(bytes, format_from_path(fs::path(opt.input)).value_or(StreamFormat::jsonl)));
  const SchemeConfig scheme =
      opt.scheme == "realtime" ? SchemeConfig::realtime() : SchemeConfig::periodic();
  const SchemeRun run = run_scheme(stream, scheme, metric_or_throw(opt.metric), 0.0, 0.0);
  const AverageRw averages = average_rw(run);

  const fs::path out_path(opt.out);
  write_file_atomic(out_path, averages_to_csv(averages));

  RunManifest manifest;
  manifest.command = command;
  manifest.config = {{"input", fs::path(opt.input).filename().string()},
                     {"scheme", opt.scheme},
                     {"metric", opt.metric}};
  manifest.input_digest = content_digest(bytes);
  manifest.outputs = {out_path.filename().string()};
  manifest.write(out_path.string() + ".manifest.json");
  return kExitOk;
}

struct FrontierOptions {
  std::string matrix;
  std::string out;
};

int run_analyze_frontier(const FrontierOptions& opt, const std::string& command) {
  const std::string bytes = read_file(opt.matrix);
  const RwMatrix matrix = matrix_from_csv(bytes);
  const auto frontier = budget_frontier(matrix);
  if (frontier.empty()) {
    std::cerr << "warning: every cell is UNDEFINED; frontier is empty\n";
  }

  const fs::path out_path(opt.out);
  write_file_atomic(out_path, frontier_to_csv(frontier));

  RunManifest manifest;
  manifest.command = command;
  manifest.config = {{"matrix", fs::path(opt.matrix).filename().string()}};
  manifest.input_digest = content_digest(bytes);
  manifest.outputs = {out_path.filename().string()};
  manifest.write(out_path.string() + ".manifest.json");
  return kExitOk;
}

struct RecommendOptions {
  std::string matrix;
  double desired_recall = 0.0;
  double epsilon = 0.0;
};

int run_recommend(const RecommendOptions& opt) {
  const RwMatrix matrix = matrix_from_csv(read_file(opt.matrix));
  const ParetoFront front = pareto_front(matrix, opt.epsilon);
  const Recommendation rec = recommend(front, opt.desired_recall);
  std::cout << recommendation_to_json(rec) << "\n";
  return rec.feasible ? kExitOk : kExitInfeasible;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Attention-budgeted top-k alert policy selection over scored message streams"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  SynthOptions synth_opt;
  auto* synth = app.add_subcommand("synth", "Generate a deterministic synthetic stream");
  synth->add_option("--seed", synth_opt.seed, "RNG seed (RANKLOAD_SEED overrides)");
  synth->add_option("--minutes", synth_opt.minutes, "Stream duration in minutes");
  synth->add_option("--rate", synth_opt.rate, "Mean messages per minute");
  synth->add_option("--prob", synth_opt.prob, "Probability a message is relevant");
  synth->add_option("--mu1", synth_opt.mu1, "Mean score of relevant messages");
  synth->add_option("--mu0", synth_opt.mu0, "Mean score of non-relevant messages");
  synth->add_option("--sigma", synth_opt.sigma, "Score standard deviation");
  synth->add_option("--start", synth_opt.start, "Stream start instant (RFC 3339)");
  synth->add_option("--out", synth_opt.out, "Output stream path (.jsonl or .csv)")->required();

  MatrixOptions matrix_opt;
  auto* matrix = app.add_subcommand("matrix", "Build one RW matrix at an instant");
  matrix->add_option("--input", matrix_opt.input, "Input stream path")->required();
  matrix->add_option("--at", matrix_opt.at, "Evaluation instant (RFC 3339 or epoch seconds)")
      ->required();
  matrix->add_option("--lookback", matrix_opt.lookback_minutes, "Lookback in minutes");
  matrix->add_option("--metric", matrix_opt.metric, "Ranking metric")
      ->check(CLI::IsMember({"recall_at_k", "precision_at_k", "ndcg_at_k"}));
  matrix->add_option("--out", matrix_opt.out, "Output CSV path")->required();

  ReplayOptions replay_opt;
  auto* replay = app.add_subcommand("replay", "Replay a scheme over a stream");
  replay->add_option("--input", replay_opt.input, "Input stream path")->required();
  replay->add_option("--scheme", replay_opt.scheme, "Evaluation scheme")
      ->required()
      ->check(CLI::IsMember({"periodic", "realtime"}));
  replay->add_option("--metric", replay_opt.metric, "Ranking metric")
      ->check(CLI::IsMember({"recall_at_k", "precision_at_k", "ndcg_at_k"}));
  replay->add_option("--desired-recall", replay_opt.desired_recall, "Target metric level")
      ->check(CLI::Range(0.0, 1.0));
  replay->add_option("--epsilon", replay_opt.epsilon, "Epsilon for the Pareto front")
      ->check(CLI::NonNegativeNumber);
  replay->add_option("--budget", replay_opt.budget,
                     "Total workload budget over the whole run (e.g. 10 or 7.5)");
  replay->add_option("--out-dir", replay_opt.out_dir, "Output directory")->required();

  auto* analyze = app.add_subcommand("analyze", "Derive series from runs or matrices");
  analyze->require_subcommand(1);

  AnalyzeErrorOptions error_opt;
  auto* error_cmd = analyze->add_subcommand("error", "Periodic-vs-realtime error series");
  error_cmd->add_option("--periodic", error_opt.periodic_dir, "Periodic replay directory")
      ->required();
  error_cmd->add_option("--realtime", error_opt.realtime_dir, "Realtime replay directory")
      ->required();
  error_cmd->add_option("--desired-recall", error_opt.desired_recall, "Target metric level")
      ->check(CLI::Range(0.0, 1.0));
  error_cmd->add_option("--out", error_opt.out, "Output CSV path")->required();

  AnalyzeStreamOptions redundancy_opt;
  auto* redundancy_cmd = analyze->add_subcommand("redundancy", "Alert overlap series");
  redundancy_cmd->add_option("--input", redundancy_opt.input, "Input stream path")->required();
  redundancy_cmd->add_option("--scheme", redundancy_opt.scheme, "Evaluation scheme")
      ->check(CLI::IsMember({"periodic", "realtime"}));
  redundancy_cmd->add_option("--base-depth", redundancy_opt.base_depth, "Current top list depth")
      ->check(CLI::PositiveNumber);
  redundancy_cmd->add_option("--probe-depth", redundancy_opt.probe_depth, "Future top list depth")
      ->check(CLI::PositiveNumber);
  redundancy_cmd->add_option("--out", redundancy_opt.out, "Output CSV path")->required();

  FrontierOptions frontier_opt;
  auto* frontier_cmd = analyze->add_subcommand("frontier", "Budget-vs-best-metric staircase");
  frontier_cmd->add_option("--matrix", frontier_opt.matrix, "Matrix CSV path")->required();
  frontier_cmd->add_option("--out", frontier_opt.out, "Output CSV path")->required();

  AnalyzeStreamOptions averages_opt;
  auto* averages_cmd = analyze->add_subcommand("averages", "Per-cell means across a run");
  averages_cmd->add_option("--input", averages_opt.input, "Input stream path")->required();
  averages_cmd->add_option("--scheme", averages_opt.scheme, "Evaluation scheme")
      ->check(CLI::IsMember({"periodic", "realtime"}));
  averages_cmd->add_option("--metric", averages_opt.metric, "Ranking metric")
      ->check(CLI::IsMember({"recall_at_k", "precision_at_k", "ndcg_at_k"}));
  averages_cmd->add_option("--out", averages_opt.out, "Output CSV path")->required();

  RecommendOptions recommend_opt;
  auto* recommend_cmd = app.add_subcommand("recommend", "Pick a policy from a matrix CSV");
  recommend_cmd->add_option("--matrix", recommend_opt.matrix, "Matrix CSV path")->required();
  recommend_cmd->add_option("--desired-recall", recommend_opt.desired_recall,
                            "Target metric level")
      ->required()
      ->check(CLI::Range(0.0, 1.0));
  recommend_cmd->add_option("--epsilon", recommend_opt.epsilon, "Epsilon for the Pareto front")
      ->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const std::string command = join_command(argc, argv);
  try {
    if (synth->parsed()) return run_synth(synth_opt, command);
    if (matrix->parsed()) return run_matrix(matrix_opt, command);
    if (replay->parsed()) return run_replay(replay_opt, command);
    if (analyze->parsed()) {
      if (error_cmd->parsed()) return run_analyze_error(error_opt, command);
      if (redundancy_cmd->parsed()) return run_analyze_redundancy(redundancy_opt, command);
      if (frontier_cmd->parsed()) return run_analyze_frontier(frontier_opt, command);
      if (averages_cmd->parsed()) return run_analyze_averages(averages_opt, command);
    }
    if (recommend_cmd->parsed()) return run_recommend(recommend_opt);
  } catch (const InsufficientData& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInsufficientData;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace rankload::cli
