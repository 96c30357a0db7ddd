#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ppmkit/eventlog.hpp"
#include "ppmkit/json.hpp"

namespace ppmkit {

enum class NodeType { StartEvent, EndEvent, Activity, Xor, And };

std::string_view to_string(NodeType type);
std::optional<NodeType> node_type_from_string(std::string_view name);
NodeType node_type_of(ObjectType type);

inline bool is_gateway(NodeType t) { return t == NodeType::Xor || t == NodeType::And; }

struct Node {
  std::string id;
  NodeType type = NodeType::Activity;
  std::string label;
  Point position;
  friend bool operator==(const Node&, const Node&) = default;
};

struct Edge {
  std::string id;
  std::string source;
  std::string target;
  std::string label;
  std::vector<Point> bendpoints;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// BPMN-subset process graph. Nodes and edges are keyed by id so iteration
/// order (and therefore every derived output) is deterministic.
class ProcessModel {
 public:
  const std::map<std::string, Node>& nodes() const { return nodes_; }
  const std::map<std::string, Edge>& edges() const { return edges_; }

  bool empty() const { return nodes_.empty() && edges_.empty(); }
  bool has_node(const std::string& id) const { return nodes_.contains(id); }
  bool has_edge(const std::string& id) const { return edges_.contains(id); }
  const Node& node(const std::string& id) const;
  const Edge& edge(const std::string& id) const;
  Node& node(const std::string& id);
  Edge& edge(const std::string& id);

  /// Throws std::invalid_argument on duplicate ids or missing endpoints.
  void add_node(Node node);
  void add_edge(Edge edge);
  /// Removes the node together with its incident edges.
  void remove_node(const std::string& id);
  void remove_edge(const std::string& id);

  /// Edge ids in id order.
  std::vector<std::string> incoming(const std::string& node_id) const;
  std::vector<std::string> outgoing(const std::string& node_id) const;
  std::size_t in_degree(const std::string& node_id) const;
  std::size_t out_degree(const std::string& node_id) const;

  /// An id not yet used by any node or edge, derived from `base`.
  std::string fresh_id(const std::string& base) const;

  friend bool operator==(const ProcessModel&, const ProcessModel&) = default;

 private:
  std::map<std::string, Node> nodes_;
  std::map<std::string, Edge> edges_;
};

Json model_to_json(const ProcessModel& model);
/// Throws std::invalid_argument on schema violations.
ProcessModel model_from_json(const Json& j);
ProcessModel read_model_file(const std::string& path);

}  // namespace ppmkit
