#include "ppmkit/classify.hpp"

#include <stdexcept>

#include <fmt/format.h>

#include "ppmkit/replay.hpp"

namespace ppmkit {

namespace {

constexpr std::pair<Stage, std::string_view> kStages[] = {
    {Stage::MixedGateway, "MixedGateway"},
    {Stage::NotWFStructured, "NotWFStructured"},
    {Stage::Unsound, "Unsound"},
    {Stage::StateSpaceExceeded, "StateSpaceExceeded"},
    {Stage::Sound, "Sound"},
};

// JSON field name for each reporting metric name.
constexpr std::pair<std::string_view, std::string_view> kMetricFields[] = {
    {"MaxSimulBlock", "max_simul_block"},
    {"PercNumBlockAsAWhole", "perc_num_block_as_a_whole"},
    {"AvgMoveOnMovedElements", "avg_move_on_moved_elements"},
    {"PercNumElementsWithMoves", "perc_num_elements_with_moves"},
    {"TotTime", "tot_time"},
    {"TotCreateTime", "tot_create_time"},
};

}  // namespace

std::string_view to_string(Stage stage) {
  for (const auto& [s, name] : kStages) {
    if (s == stage) return name;
  }
  return "?";
}

std::optional<Stage> stage_from_string(std::string_view name) {
  for (const auto& [s, n] : kStages) {
    if (n == name) return s;
  }
  return std::nullopt;
}

PerspicuityVerdict classify_model(const ProcessModel& model, std::size_t max_states) {
  if (model.nodes().empty()) throw std::invalid_argument("empty model");
  PerspicuityVerdict v;
  v.normalization = normalize(model);
  if (v.normalization.rejected()) {
    v.stage = v.normalization.rejection->kind == RejectionKind::MixedGateway ? Stage::MixedGateway
                                                                              : Stage::NotWFStructured;
    return v;
  }
  try {
    v.net = to_wfnet(*v.normalization.model);
  } catch (const TranslationError& e) {
    v.translation_error = e.what();
    v.stage = Stage::NotWFStructured;
    return v;
  }
  v.soundness = check_soundness(*v.net, max_states);
  switch (v.soundness->verdict) {
    case Verdict::Sound:
      v.stage = Stage::Sound;
      break;
    case Verdict::Unknown:
      v.stage = Stage::StateSpaceExceeded;
      break;
    case Verdict::Unsound: {
      const bool structural = !v.soundness->violations.empty() &&
                              v.soundness->violations.front().kind == ViolationKind::NotWFStructured;
      v.stage = structural ? Stage::NotWFStructured : Stage::Unsound;
      break;
    }
  }
  v.perspicuous = v.stage == Stage::Sound;
  return v;
}

SessionReport classify_session(const EventLog& log, std::size_t max_states) {
  SessionReport r;
  r.session_id = log.session_id;
  auto analysis = analyze_session(log);
  r.metrics = analysis.metrics;
  r.blocks = std::move(analysis.blocks);
  r.verdict = classify_model(final_model(expand_reconnect(log)), max_states);
  return r;
}

Json verdict_to_json(const PerspicuityVerdict& v) {
  Json j;
  j["perspicuous"] = v.perspicuous;
  j["stage"] = std::string(to_string(v.stage));
  j["normalization"] = normalization_to_json(v.normalization);
  if (v.translation_error) j["translation_error"] = *v.translation_error;
  if (v.net && v.soundness) {
    j["net"] = {{"places", v.net->places.size()},
                {"transitions", v.net->transitions.size()},
                {"arcs", v.net->arc_count()}};
    j["soundness"] = soundness_to_json(*v.net, *v.soundness);
  } else {
    j["soundness"] = nullptr;
  }
  return j;
}

Json report_to_json(const SessionReport& r) {
  Json blocks = Json::array();
  for (const auto& b : r.blocks) blocks.push_back(block_to_json(b));
  return Json{{"session_id", r.session_id},
              {"metrics", metrics_to_json(r.metrics)},
              {"blocks", std::move(blocks)},
              {"verdict", verdict_to_json(r.verdict)}};
}

StoredReport stored_report_from_json(const Json& j) {
  StoredReport out;
  try {
    out.session_id = j.at("session_id").get<std::string>();
    const auto& verdict = j.at("verdict");
    out.perspicuous = verdict.at("perspicuous").get<bool>();
    auto stage = stage_from_string(verdict.at("stage").get<std::string>());
    if (!stage) throw std::invalid_argument("unknown stage");
    out.stage = *stage;
    const auto& metrics = j.at("metrics");
    for (const auto& [name, field] : kMetricFields) {
      const auto& value = metrics.at(std::string(field));
      out.metrics.emplace_back(std::string(name),
                               value.is_null() ? std::nullopt : std::optional<double>(value.get<double>()));
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(fmt::format("invalid session report: {}", e.what()));
  }
  return out;
}

}  // namespace ppmkit
