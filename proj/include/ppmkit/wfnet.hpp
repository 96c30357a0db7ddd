#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ppmkit/model.hpp"

namespace ppmkit {

class TranslationError : public std::runtime_error {
 public:
  TranslationError(const std::string& message, std::string node)
      : std::runtime_error(message), node_(std::move(node)) {}
  const std::string& node() const { return node_; }

 private:
  std::string node_;
};

struct Transition {
  std::string id;
  std::string label;
  std::vector<std::size_t> inputs;   // place indices, ascending
  std::vector<std::size_t> outputs;  // place indices, ascending
};

/// Place/transition net with a designated source and sink place. Arcs have
/// weight one and are stored on the transitions.
struct WFNet {
  std::vector<std::string> places;
  std::vector<Transition> transitions;
  std::size_t source = 0;
  std::size_t sink = 0;

  std::size_t place_index(const std::string& id) const;
  std::size_t arc_count() const;
};

/// Token counts indexed like WFNet::places.
using Marking = std::vector<std::uint32_t>;

/// Maps a normalized model onto a WF-net: one place per sequence flow plus
/// source `i` and sink `o`; start and end events, activities and AND gateways
/// become one transition each; an XOR split (join) becomes one transition
/// per outgoing (incoming) flow. Ids derive from model ids. Throws
/// TranslationError naming the first node that violates the degree
/// constraints of a normalized model.
WFNet to_wfnet(const ProcessModel& model);

struct WFStructure {
  bool ok = true;
  /// Place and transition ids not on any path from source to sink.
  std::vector<std::string> offending;
};

/// True iff the source has no input, the sink no output, and every node lies
/// on a directed path from source to sink.
WFStructure is_wf_structured(const WFNet& net);

/// PNML export with one token on the source place.
std::string to_pnml(const WFNet& net, const std::string& net_id = "net");

}  // namespace ppmkit
