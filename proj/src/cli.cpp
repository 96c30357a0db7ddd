#include "ppmkit/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "ppmkit/chart.hpp"
#include "ppmkit/classify.hpp"
#include "ppmkit/metrics.hpp"
#include "ppmkit/replay.hpp"
#include "ppmkit/simulate.hpp"
#include "ppmkit/stats.hpp"

namespace fs = std::filesystem;

namespace ppmkit {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error(fmt::format("cannot write {}", path.string()));
  f << content;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void emit(const std::string& content, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) out << content;
  else write_file(out_path, content);
}

std::vector<fs::path> files_with_extension(const fs::path& dir, std::string_view ext) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ext) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::size_t default_max_states() {
  if (const char* env = std::getenv("PPMKIT_MAX_STATES"); env && *env) {
    try {
      std::size_t pos = 0;
      const auto v = std::stoull(env, &pos);
      if (pos == std::strlen(env) && v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
    throw UsageError(fmt::format("PPMKIT_MAX_STATES must be a positive integer, got '{}'", env));
  }
  return kDefaultMaxStates;
}

struct Options {
  std::string log, model, out, reports, profile = "structured", metric = "all", group_by = "perspicuity";
  std::string format = "json", pnml, at;
  std::uint64_t at_seq = 0;
  std::size_t max_states = 0;
  std::size_t sessions = 1;
  std::uint64_t seed = 0;
  double window = 3600, width = 1200, height = 0;
  double defect_prob = -1;
  bool exclude_unknown = false;
  ChartColors colors;
};

int cmd_parse(const Options& o, std::ostream& out) {
  const auto log = read_log_file(o.log);
  std::map<std::string, std::size_t> classes;
  std::set<std::string> objects;
  for (const auto& ev : log.events) {
    ++classes[std::string(to_string(ev.event_class()))];
    objects.insert(ev.object_id);
  }
  Json j;
  j["session_id"] = log.session_id;
  j["event_count"] = log.events.size();
  j["object_count"] = objects.size();
  j["first_timestamp"] = log.empty() ? Json(nullptr) : Json(format_timestamp(log.events.front().timestamp));
  j["last_timestamp"] = log.empty() ? Json(nullptr) : Json(format_timestamp(log.events.back().timestamp));
  Json counts = Json::object();
  for (const auto& [cls, n] : classes) counts[cls] = n;
  j["class_counts"] = std::move(counts);
  emit(dump(j), o.out, out);
  return kExitOk;
}

int cmd_replay(const Options& o, std::ostream& out) {
  const auto log = expand_reconnect(read_log_file(o.log));
  ProcessModel model;
  if (!o.at.empty()) model = replay_until(log, parse_timestamp(o.at));
  else if (o.at_seq > 0) model = replay_until(log, o.at_seq);
  else model = final_model(log);
  emit(dump(model_to_json(model)), o.out, out);
  return kExitOk;
}

int cmd_metrics(const Options& o, std::ostream& out) {
  const auto log = read_log_file(o.log);
  const auto analysis = analyze_session(log);
  Json blocks = Json::array();
  for (const auto& b : analysis.blocks) blocks.push_back(block_to_json(b));
  emit(dump(Json{{"session_id", log.session_id}, {"metrics", metrics_to_json(analysis.metrics)}, {"blocks", blocks}}),
       o.out, out);
  return kExitOk;
}

int cmd_classify(const Options& o, std::ostream& out, std::ostream& err) {
  const std::size_t max_states = o.max_states ? o.max_states : default_max_states();
  if (!o.model.empty()) {
    const auto model = read_model_file(o.model);
    const auto verdict = classify_model(model, max_states);
    if (!o.pnml.empty() && verdict.net) write_file(o.pnml, to_pnml(*verdict.net, fs::path(o.model).stem().string()));
    emit(dump(verdict_to_json(verdict)), o.out, out);
    return kExitOk;
  }
  if (fs::is_directory(o.log)) {
    if (o.out.empty()) throw UsageError("classify over a directory needs --out <dir>");
    int status = kExitOk;
    for (const auto& path : files_with_extension(o.log, ".csv")) {
      try {
        const auto report = classify_session(read_log_file(path.string()), max_states);
        write_file(fs::path(o.out) / (path.stem().string() + ".json"), dump(report_to_json(report)));
      } catch (const std::exception& e) {
        err << path.string() << ": " << e.what() << "\n";
        status = kExitValidation;
      }
    }
    return status;
  }
  const auto report = classify_session(read_log_file(o.log), max_states);
  if (!o.pnml.empty() && report.verdict.net) write_file(o.pnml, to_pnml(*report.verdict.net, report.session_id));
  emit(dump(report_to_json(report)), o.out, out);
  return kExitOk;
}

int cmd_chart(const Options& o, std::ostream& out) {
  PPMChartSpec spec;
  if (!(o.window > 0)) throw UsageError("--window must be positive");
  spec.window = Duration(static_cast<std::int64_t>(std::llround(o.window * 1000.0)));
  spec.width = o.width;
  if (o.height > 0) spec.height = o.height;
  spec.colors = o.colors;
  emit(render_ppmchart(read_log_file(o.log), spec), o.out, out);
  return kExitOk;
}

int cmd_stats(const Options& o, std::ostream& out) {
  if (o.group_by != "perspicuity") throw UsageError("only --group-by perspicuity is supported");
  std::vector<StoredReport> reports;
  for (const auto& path : files_with_extension(o.reports, ".json")) {
    std::ifstream in(path);
    Json j;
    try {
      j = Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument(fmt::format("{}: {}", path.string(), e.what()));
    }
    reports.push_back(stored_report_from_json(j));
  }
  CompareOptions options;
  options.exclude_unknown = o.exclude_unknown;
  if (o.metric != "all") {
    if (std::find(std::begin(kMetricNames), std::end(kMetricNames), o.metric) == std::end(kMetricNames)) {
      throw UsageError(fmt::format("unknown metric {}", o.metric));
    }
    options.metrics.push_back(o.metric);
  }
  const auto cmp = compare_groups(reports, options);
  emit(o.format == "text" ? comparison_to_text(cmp) : dump(comparison_to_json(cmp)), o.out, out);
  return kExitOk;
}

int cmd_simulate(const Options& o, std::ostream& err) {
  if (o.out.empty()) throw UsageError("simulate needs --out <dir>");
  auto profile = profile_preset(o.profile);
  if (o.defect_prob >= 0) profile.defect_prob = o.defect_prob;
  for (const auto& log : simulate_cohort(profile, o.sessions, o.seed)) {
    write_file(fs::path(o.out) / (log.session_id + ".csv"), serialize_log(log));
  }
  err << fmt::format("wrote {} {} sessions to {}\n", o.sessions, o.profile, o.out);
  return kExitOk;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Analyze recorded process-modeling sessions", "ppmkit"};
  app.require_subcommand(1);
  Options o;

  auto* parse = app.add_subcommand("parse", "Validate a modeling-event log and summarize it");
  parse->add_option("--log", o.log, "Event-log CSV")->required();
  parse->add_option("--out", o.out, "Write JSON here instead of stdout");

  auto* replay = app.add_subcommand("replay", "Rebuild the process model from a log");
  replay->add_option("--log", o.log, "Event-log CSV")->required();
  replay->add_option("--at-seq", o.at_seq, "Stop after this seq");
  replay->add_option("--at", o.at, "Stop after this instant (YYYY-MM-DDThh:mm:ss.sssZ)");
  replay->add_option("--out", o.out, "Model JSON output");

  auto* metrics = app.add_subcommand("metrics", "Compute the six session metrics");
  metrics->add_option("--log", o.log, "Event-log CSV")->required();
  metrics->add_option("--out", o.out, "JSON output");

  auto* classify = app.add_subcommand("classify", "Session report with perspicuity verdict");
  auto* log_opt = classify->add_option("--log", o.log, "Event-log CSV or a directory of them");
  auto* model_opt = classify->add_option("--model", o.model, "Model JSON instead of a log");
  log_opt->excludes(model_opt);
  classify->add_option("--out", o.out, "JSON output (directory when --log is a directory)");
  classify->add_option("--max-states", o.max_states, "Soundness state-space cap")->check(CLI::PositiveNumber);
  classify->add_option("--pnml", o.pnml, "Also export the WF-net as PNML");

  auto* chart = app.add_subcommand("chart", "Render a PPMChart as SVG");
  chart->add_option("--log", o.log, "Event-log CSV")->required();
  chart->add_option("--out", o.out, "SVG output");
  chart->add_option("--window", o.window, "Time window in seconds")->capture_default_str();
  chart->add_option("--width", o.width, "Canvas width in px")->capture_default_str()->check(CLI::PositiveNumber);
  chart->add_option("--height", o.height, "Canvas height in px (default 20 per row)");
  chart->add_option("--color-create", o.colors.create)->capture_default_str();
  chart->add_option("--color-move", o.colors.move)->capture_default_str();
  chart->add_option("--color-delete", o.colors.remove)->capture_default_str();
  chart->add_option("--color-rename", o.colors.rename)->capture_default_str();

  auto* stats = app.add_subcommand("stats", "Compare metrics between perspicuous and other sessions");
  stats->add_option("--reports", o.reports, "Directory of session-report JSON files")->required()->check(CLI::ExistingDirectory);
  stats->add_flag("--exclude-unknown", o.exclude_unknown, "Drop sessions whose soundness check hit the cap");
  stats->add_option("--metric", o.metric, "Metric name or 'all'")->capture_default_str();
  stats->add_option("--group-by", o.group_by)->capture_default_str();
  stats->add_option("--format", o.format)->check(CLI::IsMember({"json", "text"}))->capture_default_str();
  stats->add_option("--out", o.out, "Output file");

  auto* simulate = app.add_subcommand("simulate", "Generate synthetic modeling sessions");
  simulate->add_option("--profile", o.profile)->check(CLI::IsMember({"structured", "chaotic", "slow", "fast"}))->capture_default_str();
  simulate->add_option("--sessions", o.sessions)->check(CLI::PositiveNumber)->capture_default_str();
  simulate->add_option("--seed", o.seed)->capture_default_str();
  simulate->add_option("--defect-prob", o.defect_prob, "Override the profile's defect probability");
  simulate->add_option("--out", o.out, "Output directory")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*parse) return cmd_parse(o, out);
    if (*replay) return cmd_replay(o, out);
    if (*metrics) return cmd_metrics(o, out);
    if (*classify) {
      if (o.log.empty() && o.model.empty()) throw UsageError("classify needs --log or --model");
      return cmd_classify(o, out, err);
    }
    if (*chart) return cmd_chart(o, out);
    if (*stats) return cmd_stats(o, out);
    if (*simulate) return cmd_simulate(o, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitUsage;
}

}  // namespace ppmkit
