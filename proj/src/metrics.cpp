#include "ppmkit/metrics.hpp"

#include <map>
#include <set>

#include <fmt/format.h>

#include "ppmkit/replay.hpp"

namespace ppmkit {

MaybeRational avg_move_on_moved_elements(const EventLog& log) {
  std::map<std::string, std::int64_t> moves;
  for (const auto& ev : log.events) {
    if (ev.event_class() == EventClass::Move) ++moves[ev.object_id];
  }
  if (moves.empty()) return std::nullopt;
  std::int64_t total = 0;
  for (const auto& [id, n] : moves) total += n;
  return Rational(total, static_cast<std::int64_t>(moves.size()));
}

Rational perc_num_elements_with_moves(const EventLog& log) {
  std::set<std::string> created, moved;
  for (const auto& ev : log.events) {
    const auto cls = ev.event_class();
    if (cls == EventClass::Create) created.insert(ev.object_id);
    else if (cls == EventClass::Move) moved.insert(ev.object_id);
  }
  if (created.empty()) throw MetricError("empty session");
  return Rational(static_cast<std::int64_t>(moved.size()), static_cast<std::int64_t>(created.size()));
}

Duration tot_time(const EventLog& log) {
  if (log.events.empty()) throw MetricError("empty log");
  return log.events.back().timestamp - log.events.front().timestamp;
}

Duration tot_create_time(const EventLog& log) {
  const ModelingEvent* first = nullptr;
  const ModelingEvent* last = nullptr;
  for (const auto& ev : log.events) {
    if (ev.event_class() != EventClass::Create) continue;
    if (!first) first = &ev;
    last = &ev;
  }
  if (!first) throw MetricError("log has no create events");
  return last->timestamp - first->timestamp;
}

SessionAnalysis analyze_session(const EventLog& raw) {
  const EventLog log = expand_reconnect(raw);
  SessionAnalysis out;
  out.blocks = detect_blocks(final_model(log), log);
  auto& m = out.metrics;
  m.max_simul_block = max_simul_block(out.blocks);
  m.perc_num_block_as_a_whole = perc_blocks_as_whole(out.blocks, log);
  m.avg_move_on_moved_elements = avg_move_on_moved_elements(log);
  m.perc_num_elements_with_moves = perc_num_elements_with_moves(log);
  m.tot_time = tot_time(log);
  m.tot_create_time = tot_create_time(log);
  return out;
}

SessionMetrics compute_session_metrics(const EventLog& log) { return analyze_session(log).metrics; }

std::optional<double> metric_value(const SessionMetrics& m, std::string_view name) {
  auto opt = [](const MaybeRational& r) -> std::optional<double> {
    if (!r) return std::nullopt;
    return to_double(*r);
  };
  if (name == "MaxSimulBlock") return static_cast<double>(m.max_simul_block);
  if (name == "PercNumBlockAsAWhole") return opt(m.perc_num_block_as_a_whole);
  if (name == "AvgMoveOnMovedElements") return opt(m.avg_move_on_moved_elements);
  if (name == "PercNumElementsWithMoves") return to_double(m.perc_num_elements_with_moves);
  if (name == "TotTime") return to_seconds(m.tot_time);
  if (name == "TotCreateTime") return to_seconds(m.tot_create_time);
  throw std::invalid_argument(fmt::format("unknown metric {}", name));
}

Json metrics_to_json(const SessionMetrics& m) {
  auto ratio = [](const MaybeRational& r) -> Json {
    if (!r) return nullptr;
    return to_double(*r);
  };
  auto exact = [](const MaybeRational& r) -> Json {
    if (!r) return nullptr;
    return to_string(*r);
  };
  Json out;
  out["max_simul_block"] = m.max_simul_block;
  out["perc_num_block_as_a_whole"] = ratio(m.perc_num_block_as_a_whole);
  out["avg_move_on_moved_elements"] = ratio(m.avg_move_on_moved_elements);
  out["perc_num_elements_with_moves"] = to_double(m.perc_num_elements_with_moves);
  out["tot_time"] = to_seconds(m.tot_time);
  out["tot_create_time"] = to_seconds(m.tot_create_time);
  out["exact"] = {{"perc_num_block_as_a_whole", exact(m.perc_num_block_as_a_whole)},
                  {"avg_move_on_moved_elements", exact(m.avg_move_on_moved_elements)},
                  {"perc_num_elements_with_moves", to_string(m.perc_num_elements_with_moves)}};
  return out;
}

}  // namespace ppmkit
