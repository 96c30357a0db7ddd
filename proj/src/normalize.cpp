#include "ppmkit/normalize.hpp"

#include <set>
#include <stdexcept>

#include <fmt/format.h>

namespace ppmkit {

namespace {

// Follows single-successor chains from `node` until the first node with more
// than one incoming flow. Any divergence or dead end disqualifies the walk.
std::optional<std::string> first_merge_forward(const ProcessModel& m, std::string node) {
  std::set<std::string> seen;
  for (;;) {
    if (!seen.insert(node).second) return std::nullopt;
    if (m.in_degree(node) > 1) return node;
    auto out = m.outgoing(node);
    if (out.size() != 1) return std::nullopt;
    node = m.edge(out.front()).target;
  }
}

// Mirror image: follows single-predecessor chains back to the first node
// with more than one outgoing flow.
std::optional<std::string> first_split_backward(const ProcessModel& m, std::string node) {
  std::set<std::string> seen;
  for (;;) {
    if (!seen.insert(node).second) return std::nullopt;
    if (m.out_degree(node) > 1) return node;
    auto in = m.incoming(node);
    if (in.size() != 1) return std::nullopt;
    node = m.edge(in.front()).source;
  }
}

// Sign of the single gateway every walk reached, if any.
std::optional<NodeType> common_gateway(const ProcessModel& m, const std::vector<std::optional<std::string>>& hits) {
  if (hits.empty()) return std::nullopt;
  for (const auto& h : hits) {
    if (!h || *h != *hits.front()) return std::nullopt;
  }
  const auto& n = m.node(*hits.front());
  if (!is_gateway(n.type)) return std::nullopt;
  return n.type;
}

std::vector<std::string> nodes_of_type(const ProcessModel& m, NodeType type) {
  std::vector<std::string> out;
  for (const auto& [id, n] : m.nodes()) {
    if (n.type == type) out.push_back(id);
  }
  return out;
}

void record(std::vector<AppliedRule>* applied, std::string rule, std::vector<std::string> nodes) {
  if (applied) applied->push_back(AppliedRule{std::move(rule), std::move(nodes)});
}

void merge_events(ProcessModel& m, bool starts, std::vector<AppliedRule>* applied) {
  const auto events = nodes_of_type(m, starts ? NodeType::StartEvent : NodeType::EndEvent);
  if (events.size() < 2) return;

  std::vector<std::optional<std::string>> hits;
  for (const auto& ev : events) {
    if (starts) {
      auto out = m.outgoing(ev);
      hits.push_back(out.size() == 1 ? first_merge_forward(m, m.edge(out.front()).target) : std::nullopt);
    } else {
      auto in = m.incoming(ev);
      hits.push_back(in.size() == 1 ? first_split_backward(m, m.edge(in.front()).source) : std::nullopt);
    }
  }
  const NodeType sign = common_gateway(m, hits).value_or(NodeType::Xor);

  const Point anchor = m.node(events.front()).position;
  const std::string event_id = m.fresh_id(starts ? "start" : "end");
  m.add_node(Node{event_id, starts ? NodeType::StartEvent : NodeType::EndEvent, "", anchor});
  const std::string gateway_id = m.fresh_id(starts ? "start__split" : "end__join");
  m.add_node(Node{gateway_id, sign, "", anchor});

  for (const auto& ev : events) {
    if (starts) {
      for (const auto& e : m.outgoing(ev)) m.edge(e).source = gateway_id;
    } else {
      for (const auto& e : m.incoming(ev)) m.edge(e).target = gateway_id;
    }
    m.remove_node(ev);
  }
  if (starts) {
    m.add_edge(Edge{m.fresh_id(event_id + "__flow"), event_id, gateway_id, "", {}});
  } else {
    m.add_edge(Edge{m.fresh_id(event_id + "__flow"), gateway_id, event_id, "", {}});
  }

  std::vector<std::string> nodes = events;
  nodes.push_back(event_id);
  nodes.push_back(gateway_id);
  record(applied, starts ? "merge_start_events" : "merge_end_events", std::move(nodes));
}

}  // namespace

std::string_view to_string(RejectionKind kind) {
  switch (kind) {
    case RejectionKind::MixedGateway: return "mixed gateway";
    case RejectionKind::MissingStartEvent: return "no start event";
    case RejectionKind::MissingEndEvent: return "no end event";
  }
  return "?";
}

std::optional<Rejection> check_mixed_gateways(const ProcessModel& model) {
  std::vector<std::string> mixed;
  for (const auto& [id, n] : model.nodes()) {
    if (is_gateway(n.type) && model.in_degree(id) >= 2 && model.out_degree(id) >= 2) mixed.push_back(id);
  }
  if (mixed.empty()) return std::nullopt;
  return Rejection{RejectionKind::MixedGateway, "mixed gateway", std::move(mixed)};
}

ProcessModel normalize_start_end(const ProcessModel& model, std::vector<AppliedRule>* applied) {
  if (model.nodes().empty()) throw std::invalid_argument("empty model");
  ProcessModel m = model;

  for (const auto& id : nodes_of_type(model, NodeType::Activity)) {
    const Point p = m.node(id).position;
    if (m.in_degree(id) == 0) {
      auto start = m.fresh_id(id + "__start");
      m.add_node(Node{start, NodeType::StartEvent, "", p});
      m.add_edge(Edge{m.fresh_id(start + "__flow"), start, id, "", {}});
      record(applied, "add_start_event", {id, start});
    }
    if (m.out_degree(id) == 0) {
      auto end = m.fresh_id(id + "__end");
      m.add_node(Node{end, NodeType::EndEvent, "", p});
      m.add_edge(Edge{m.fresh_id(end + "__flow"), id, end, "", {}});
      record(applied, "add_end_event", {id, end});
    }
  }

  merge_events(m, true, applied);
  merge_events(m, false, applied);
  return m;
}

ProcessModel normalize_splits_joins(const ProcessModel& model, std::vector<AppliedRule>* applied) {
  struct Insertion {
    std::string node;
    bool join;
    NodeType sign;
  };
  // Signs are inferred on the input model so the order of insertions does
  // not influence them.
  std::vector<Insertion> plan;
  for (const auto& [id, n] : model.nodes()) {
    if (is_gateway(n.type)) continue;
    const auto in = model.incoming(id);
    if (in.size() > 1) {
      std::vector<std::optional<std::string>> hits;
      for (const auto& e : in) hits.push_back(first_split_backward(model, model.edge(e).source));
      plan.push_back({id, true, common_gateway(model, hits).value_or(NodeType::Xor)});
    }
    const auto out = model.outgoing(id);
    if (out.size() > 1) {
      std::vector<std::optional<std::string>> hits;
      for (const auto& e : out) hits.push_back(first_merge_forward(model, model.edge(e).target));
      plan.push_back({id, false, common_gateway(model, hits).value_or(NodeType::And)});
    }
  }

  ProcessModel m = model;
  for (const auto& step : plan) {
    const Point p = m.node(step.node).position;
    if (step.join) {
      auto gw = m.fresh_id(step.node + "__join");
      m.add_node(Node{gw, step.sign, "", p});
      for (const auto& e : m.incoming(step.node)) m.edge(e).target = gw;
      m.add_edge(Edge{m.fresh_id(gw + "__flow"), gw, step.node, "", {}});
      record(applied, "insert_join", {step.node, gw});
    } else {
      auto gw = m.fresh_id(step.node + "__split");
      m.add_node(Node{gw, step.sign, "", p});
      for (const auto& e : m.outgoing(step.node)) m.edge(e).source = gw;
      m.add_edge(Edge{m.fresh_id(gw + "__flow"), step.node, gw, "", {}});
      record(applied, "insert_split", {step.node, gw});
    }
  }
  return m;
}

NormalizationOutcome normalize(const ProcessModel& model) {
  NormalizationOutcome out;
  if (auto r = check_mixed_gateways(model)) {
    out.rejection = std::move(r);
    return out;
  }
  ProcessModel m = normalize_start_end(model, &out.applied_rules);
  const auto starts = nodes_of_type(m, NodeType::StartEvent);
  const auto ends = nodes_of_type(m, NodeType::EndEvent);
  if (starts.empty()) {
    out.rejection = Rejection{RejectionKind::MissingStartEvent, "no start event", {}};
    return out;
  }
  if (ends.empty()) {
    out.rejection = Rejection{RejectionKind::MissingEndEvent, "no end event", {}};
    return out;
  }
  out.model = normalize_splits_joins(m, &out.applied_rules);
  return out;
}

Json normalization_to_json(const NormalizationOutcome& outcome) {
  Json rules = Json::array();
  for (const auto& r : outcome.applied_rules) rules.push_back({{"rule", r.rule}, {"nodes", r.nodes}});
  Json j;
  j["rejected"] = outcome.rejected();
  j["reason"] = outcome.rejection ? Json(outcome.rejection->reason) : Json(nullptr);
  if (outcome.rejection) j["reason_nodes"] = outcome.rejection->nodes;
  j["applied_rules"] = std::move(rules);
  return j;
}

}  // namespace ppmkit
