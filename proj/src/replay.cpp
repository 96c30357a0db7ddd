#include "ppmkit/replay.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace ppmkit {

namespace {

[[noreturn]] void missing(const ModelingEvent& ev, const std::string& id) {
  throw ReplayError(fmt::format("event seq {} ({}) references missing object {}", ev.seq, to_string(ev.kind), id));
}

}  // namespace

bool Replayer::is_structural(const ModelingEvent& event) {
  switch (classify(event.kind)) {
    case EventClass::Create:
    case EventClass::Delete:
    case EventClass::Reconnect:
      return true;
    case EventClass::Move:
    case EventClass::Other:
      return false;
  }
  return false;
}

void Replayer::apply(const ModelingEvent& ev) {
  ++applied_;
  const ObjectType type = object_type_of(ev.kind);
  const bool is_node = is_node_type(type);

  auto add_edge = [&]() {
    if (!ev.source_id || !model_.has_node(*ev.source_id)) missing(ev, ev.source_id.value_or("<none>"));
    if (!ev.target_id || !model_.has_node(*ev.target_id)) missing(ev, ev.target_id.value_or("<none>"));
    if (model_.has_edge(ev.object_id) || model_.has_node(ev.object_id)) {
      throw ReplayError(fmt::format("event seq {} creates existing object {}", ev.seq, ev.object_id));
    }
    cascaded_.erase(ev.object_id);
    model_.add_edge(Edge{ev.object_id, *ev.source_id, *ev.target_id, ev.label.value_or(""), {}});
  };

  switch (classify(ev.kind)) {
    case EventClass::Create:
      if (is_node) {
        if (model_.has_node(ev.object_id) || model_.has_edge(ev.object_id)) {
          throw ReplayError(fmt::format("event seq {} creates existing object {}", ev.seq, ev.object_id));
        }
        model_.add_node(Node{ev.object_id, node_type_of(type), ev.label.value_or(""), ev.position.value_or(Point{})});
      } else {
        add_edge();
      }
      return;

    case EventClass::Delete:
      if (is_node) {
        if (!model_.has_node(ev.object_id)) missing(ev, ev.object_id);
        for (const auto& id : model_.incoming(ev.object_id)) cascaded_.insert(id);
        for (const auto& id : model_.outgoing(ev.object_id)) cascaded_.insert(id);
        model_.remove_node(ev.object_id);
      } else if (model_.has_edge(ev.object_id)) {
        model_.remove_edge(ev.object_id);
      } else if (cascaded_.erase(ev.object_id) == 0) {
        missing(ev, ev.object_id);
      }
      return;

    case EventClass::Reconnect:
      if (!model_.has_edge(ev.object_id)) missing(ev, ev.object_id);
      model_.remove_edge(ev.object_id);
      add_edge();
      return;

    case EventClass::Move:
      if (is_node) {
        if (!model_.has_node(ev.object_id)) missing(ev, ev.object_id);
        if (ev.position) model_.node(ev.object_id).position = *ev.position;
        return;
      }
      {
        if (!model_.has_edge(ev.object_id)) missing(ev, ev.object_id);
        auto& bends = model_.edge(ev.object_id).bendpoints;
        // The log does not carry a bendpoint index: moves update the most
        // recently created bendpoint, deletes remove the one at the given
        // position (or the last one).
        if (ev.kind == EventKind::CreateEdgeBendpoint) {
          bends.push_back(ev.position.value_or(Point{}));
        } else if (ev.kind == EventKind::MoveEdgeBendpoint) {
          if (!bends.empty() && ev.position) bends.back() = *ev.position;
        } else if (ev.kind == EventKind::DeleteEdgeBendpoint && !bends.empty()) {
          auto it = ev.position ? std::find(bends.begin(), bends.end(), *ev.position) : bends.end();
          if (it == bends.end()) it = std::prev(bends.end());
          bends.erase(it);
        }
      }
      return;

    case EventClass::Other:
      if (is_node) {
        if (!model_.has_node(ev.object_id)) missing(ev, ev.object_id);
        model_.node(ev.object_id).label = ev.label.value_or("");
      } else {
        if (!model_.has_edge(ev.object_id)) missing(ev, ev.object_id);
        model_.edge(ev.object_id).label = ev.label.value_or("");
      }
      return;
  }
}

ProcessModel replay_until(const EventLog& log, std::uint64_t cutoff_seq) {
  Replayer r;
  for (const auto& ev : log.events) {
    if (ev.seq > cutoff_seq) break;
    r.apply(ev);
  }
  return r.model();
}

ProcessModel replay_until(const EventLog& log, Timestamp cutoff) {
  Replayer r;
  for (const auto& ev : log.events) {
    if (ev.timestamp > cutoff) break;
    r.apply(ev);
  }
  return r.model();
}

ProcessModel final_model(const EventLog& log) {
  Replayer r;
  for (const auto& ev : log.events) r.apply(ev);
  return r.model();
}

}  // namespace ppmkit
