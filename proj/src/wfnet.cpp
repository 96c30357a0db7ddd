#include "ppmkit/wfnet.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

#include <fmt/format.h>

namespace ppmkit {

std::size_t WFNet::place_index(const std::string& id) const {
  auto it = std::find(places.begin(), places.end(), id);
  if (it == places.end()) throw std::out_of_range(fmt::format("no place {}", id));
  return static_cast<std::size_t>(it - places.begin());
}

std::size_t WFNet::arc_count() const {
  std::size_t n = 0;
  for (const auto& t : transitions) n += t.inputs.size() + t.outputs.size();
  return n;
}

WFNet to_wfnet(const ProcessModel& model) {
  WFNet net;
  std::unordered_map<std::string, std::size_t> flow_place;
  net.places.push_back("i");
  net.source = 0;
  for (const auto& [id, e] : model.edges()) {
    flow_place.emplace(id, net.places.size());
    net.places.push_back("p_" + id);
  }
  net.sink = net.places.size();
  net.places.push_back("o");

  std::size_t starts = 0, ends = 0;
  for (const auto& [id, n] : model.nodes()) {
    starts += n.type == NodeType::StartEvent;
    ends += n.type == NodeType::EndEvent;
  }
  if (starts != 1) throw TranslationError(fmt::format("expected exactly one start event, found {}", starts), "");
  if (ends != 1) throw TranslationError(fmt::format("expected exactly one end event, found {}", ends), "");

  auto places_of = [&](const std::vector<std::string>& edges) {
    std::vector<std::size_t> out;
    for (const auto& e : edges) out.push_back(flow_place.at(e));
    std::sort(out.begin(), out.end());
    return out;
  };
  auto add = [&](std::string id, const Node& n, std::vector<std::size_t> in, std::vector<std::size_t> out) {
    std::sort(in.begin(), in.end());
    std::sort(out.begin(), out.end());
    net.transitions.push_back(Transition{std::move(id), n.label, std::move(in), std::move(out)});
  };

  for (const auto& [id, n] : model.nodes()) {
    const auto in = model.incoming(id);
    const auto out = model.outgoing(id);
    auto violation = [&](std::string_view expectation) {
      return TranslationError(fmt::format("{} {} has {} incoming and {} outgoing flows ({})", to_string(n.type), id,
                                          in.size(), out.size(), expectation),
                              id);
    };
    switch (n.type) {
      case NodeType::StartEvent:
        if (!in.empty() || out.size() != 1) throw violation("start event needs 0 in / 1 out");
        add("t_" + id, n, {net.source}, places_of(out));
        break;
      case NodeType::EndEvent:
        if (in.size() != 1 || !out.empty()) throw violation("end event needs 1 in / 0 out");
        add("t_" + id, n, places_of(in), {net.sink});
        break;
      case NodeType::Activity:
        if (in.size() != 1 || out.size() != 1) throw violation("activity needs 1 in / 1 out");
        add("t_" + id, n, places_of(in), places_of(out));
        break;
      case NodeType::And:
      case NodeType::Xor:
        if (in.empty() || out.empty()) throw violation("gateway needs at least one flow on each side");
        if (in.size() > 1 && out.size() > 1) throw violation("mixed gateway");
        if (n.type == NodeType::And) {
          add("t_" + id, n, places_of(in), places_of(out));
        } else if (in.size() == 1) {
          for (const auto& e : out) add(fmt::format("t_{}_{}", id, e), n, places_of(in), {flow_place.at(e)});
        } else {
          for (const auto& e : in) add(fmt::format("t_{}_{}", id, e), n, {flow_place.at(e)}, places_of(out));
        }
        break;
    }
  }
  return net;
}

WFStructure is_wf_structured(const WFNet& net) {
  // Nodes: places [0, P), transitions [P, P+T).
  const std::size_t P = net.places.size();
  const std::size_t T = net.transitions.size();
  std::vector<std::vector<std::size_t>> fwd(P + T), bwd(P + T);
  for (std::size_t t = 0; t < T; ++t) {
    for (auto p : net.transitions[t].inputs) {
      fwd[p].push_back(P + t);
      bwd[P + t].push_back(p);
    }
    for (auto p : net.transitions[t].outputs) {
      fwd[P + t].push_back(p);
      bwd[p].push_back(P + t);
    }
  }
  auto reach = [&](std::size_t from, const std::vector<std::vector<std::size_t>>& adj) {
    std::vector<bool> seen(P + T, false);
    std::deque<std::size_t> queue{from};
    seen[from] = true;
    while (!queue.empty()) {
      auto v = queue.front();
      queue.pop_front();
      for (auto w : adj[v]) {
        if (!seen[w]) {
          seen[w] = true;
          queue.push_back(w);
        }
      }
    }
    return seen;
  };
  const auto from_source = reach(net.source, fwd);
  const auto to_sink = reach(net.sink, bwd);

  WFStructure out;
  if (!bwd[net.source].empty() || !fwd[net.sink].empty() || net.source == net.sink) out.ok = false;
  for (std::size_t v = 0; v < P + T; ++v) {
    if (!(from_source[v] && to_sink[v])) {
      out.ok = false;
      out.offending.push_back(v < P ? net.places[v] : net.transitions[v - P].id);
    }
  }
  return out;
}

namespace {

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace

std::string to_pnml(const WFNet& net, const std::string& net_id) {
  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<pnml xmlns=\"http://www.pnml.org/version-2009/grammar/pnml\">\n";
  out += fmt::format("  <net id=\"{}\" type=\"http://www.pnml.org/version-2009/grammar/ptnet\">\n",
                     xml_escape(net_id));
  out += "    <page id=\"page0\">\n";
  for (std::size_t p = 0; p < net.places.size(); ++p) {
    out += fmt::format("      <place id=\"{}\"><name><text>{}</text></name>", xml_escape(net.places[p]),
                       xml_escape(net.places[p]));
    if (p == net.source) out += "<initialMarking><text>1</text></initialMarking>";
    out += "</place>\n";
  }
  for (const auto& t : net.transitions) {
    out += fmt::format("      <transition id=\"{}\"><name><text>{}</text></name></transition>\n", xml_escape(t.id),
                       xml_escape(t.label.empty() ? t.id : t.label));
  }
  std::size_t arc = 0;
  for (const auto& t : net.transitions) {
    for (auto p : t.inputs) {
      out += fmt::format("      <arc id=\"a{}\" source=\"{}\" target=\"{}\"/>\n", arc++, xml_escape(net.places[p]),
                         xml_escape(t.id));
    }
    for (auto p : t.outputs) {
      out += fmt::format("      <arc id=\"a{}\" source=\"{}\" target=\"{}\"/>\n", arc++, xml_escape(t.id),
                         xml_escape(net.places[p]));
    }
  }
  out += "    </page>\n  </net>\n</pnml>\n";
  return out;
}

}  // namespace ppmkit
