#include "ppmkit/model.hpp"

#include <fstream>
#include <stdexcept>

#include <fmt/format.h>

namespace ppmkit {

std::string_view to_string(NodeType type) {
  switch (type) {
    case NodeType::StartEvent: return "START_EVENT";
    case NodeType::EndEvent: return "END_EVENT";
    case NodeType::Activity: return "ACTIVITY";
    case NodeType::Xor: return "XOR";
    case NodeType::And: return "AND";
  }
  return "?";
}

std::optional<NodeType> node_type_from_string(std::string_view name) {
  auto t = object_type_from_string(name);
  if (!t || *t == ObjectType::Edge) return std::nullopt;
  return node_type_of(*t);
}

NodeType node_type_of(ObjectType type) {
  switch (type) {
    case ObjectType::StartEvent: return NodeType::StartEvent;
    case ObjectType::EndEvent: return NodeType::EndEvent;
    case ObjectType::Activity: return NodeType::Activity;
    case ObjectType::Xor: return NodeType::Xor;
    case ObjectType::And: return NodeType::And;
    case ObjectType::Edge: break;
  }
  throw std::invalid_argument("edge is not a node type");
}

const Node& ProcessModel::node(const std::string& id) const {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) throw std::out_of_range(fmt::format("no node {}", id));
  return it->second;
}

Node& ProcessModel::node(const std::string& id) {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) throw std::out_of_range(fmt::format("no node {}", id));
  return it->second;
}

const Edge& ProcessModel::edge(const std::string& id) const {
  auto it = edges_.find(id);
  if (it == edges_.end()) throw std::out_of_range(fmt::format("no edge {}", id));
  return it->second;
}

Edge& ProcessModel::edge(const std::string& id) {
  auto it = edges_.find(id);
  if (it == edges_.end()) throw std::out_of_range(fmt::format("no edge {}", id));
  return it->second;
}

void ProcessModel::add_node(Node node) {
  if (node.id.empty()) throw std::invalid_argument("empty node id");
  if (nodes_.contains(node.id) || edges_.contains(node.id)) {
    throw std::invalid_argument(fmt::format("duplicate id {}", node.id));
  }
  auto id = node.id;
  nodes_.emplace(std::move(id), std::move(node));
}

void ProcessModel::add_edge(Edge edge) {
  if (edge.id.empty()) throw std::invalid_argument("empty edge id");
  if (nodes_.contains(edge.id) || edges_.contains(edge.id)) {
    throw std::invalid_argument(fmt::format("duplicate id {}", edge.id));
  }
  if (!nodes_.contains(edge.source) || !nodes_.contains(edge.target)) {
    throw std::invalid_argument(fmt::format("edge {} endpoint does not exist", edge.id));
  }
  auto id = edge.id;
  edges_.emplace(std::move(id), std::move(edge));
}

void ProcessModel::remove_node(const std::string& id) {
  if (nodes_.erase(id) == 0) throw std::out_of_range(fmt::format("no node {}", id));
  std::erase_if(edges_, [&](const auto& kv) { return kv.second.source == id || kv.second.target == id; });
}

void ProcessModel::remove_edge(const std::string& id) {
  if (edges_.erase(id) == 0) throw std::out_of_range(fmt::format("no edge {}", id));
}

std::vector<std::string> ProcessModel::incoming(const std::string& node_id) const {
  std::vector<std::string> out;
  for (const auto& [id, e] : edges_) {
    if (e.target == node_id) out.push_back(id);
  }
  return out;
}

std::vector<std::string> ProcessModel::outgoing(const std::string& node_id) const {
  std::vector<std::string> out;
  for (const auto& [id, e] : edges_) {
    if (e.source == node_id) out.push_back(id);
  }
  return out;
}

std::size_t ProcessModel::in_degree(const std::string& node_id) const {
  std::size_t n = 0;
  for (const auto& [id, e] : edges_) n += e.target == node_id;
  return n;
}

std::size_t ProcessModel::out_degree(const std::string& node_id) const {
  std::size_t n = 0;
  for (const auto& [id, e] : edges_) n += e.source == node_id;
  return n;
}

std::string ProcessModel::fresh_id(const std::string& base) const {
  auto used = [&](const std::string& id) { return nodes_.contains(id) || edges_.contains(id); };
  if (!used(base)) return base;
  for (int i = 2;; ++i) {
    auto candidate = fmt::format("{}_{}", base, i);
    if (!used(candidate)) return candidate;
  }
}

Json model_to_json(const ProcessModel& model) {
  Json nodes = Json::array();
  for (const auto& [id, n] : model.nodes()) {
    nodes.push_back({{"id", n.id},
                     {"type", std::string(to_string(n.type))},
                     {"label", n.label},
                     {"x", n.position.x},
                     {"y", n.position.y}});
  }
  Json edges = Json::array();
  for (const auto& [id, e] : model.edges()) {
    Json bends = Json::array();
    for (const auto& p : e.bendpoints) bends.push_back({p.x, p.y});
    edges.push_back({{"id", e.id},
                     {"source", e.source},
                     {"target", e.target},
                     {"label", e.label},
                     {"bendpoints", std::move(bends)}});
  }
  return Json{{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

ProcessModel model_from_json(const Json& j) {
  ProcessModel m;
  try {
    for (const auto& jn : j.at("nodes")) {
      Node n;
      n.id = jn.at("id").get<std::string>();
      auto type = node_type_from_string(jn.at("type").get<std::string>());
      if (!type) throw std::invalid_argument(fmt::format("node {}: unknown type", n.id));
      n.type = *type;
      n.label = jn.value("label", "");
      n.position = Point{jn.value("x", std::int64_t{0}), jn.value("y", std::int64_t{0})};
      m.add_node(std::move(n));
    }
    for (const auto& je : j.at("edges")) {
      Edge e;
      e.id = je.at("id").get<std::string>();
      e.source = je.at("source").get<std::string>();
      e.target = je.at("target").get<std::string>();
      e.label = je.value("label", "");
      if (je.contains("bendpoints")) {
        for (const auto& p : je.at("bendpoints")) {
          e.bendpoints.push_back(Point{p.at(0).get<std::int64_t>(), p.at(1).get<std::int64_t>()});
        }
      }
      m.add_edge(std::move(e));
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(fmt::format("invalid model JSON: {}", e.what()));
  }
  return m;
}

ProcessModel read_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument(fmt::format("cannot open {}", path));
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(fmt::format("{}: {}", path, e.what()));
  }
  return model_from_json(j);
}

}  // namespace ppmkit
