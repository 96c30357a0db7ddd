#include "ppmkit/blocks.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <unordered_map>

#include <fmt/format.h>

#include "ppmkit/replay.hpp"

namespace ppmkit {

namespace {

struct Graph {
  std::vector<std::string> ids;
  std::unordered_map<std::string, std::size_t> index;
  // Parallel arrays over edges.
  std::vector<std::size_t> src;
  std::vector<std::size_t> dst;
  std::vector<std::vector<std::size_t>> out_edges;
  std::vector<std::vector<std::size_t>> in_edges;

  explicit Graph(const ProcessModel& m) {
    for (const auto& [id, n] : m.nodes()) {
      index.emplace(id, ids.size());
      ids.push_back(id);
    }
    out_edges.resize(ids.size());
    in_edges.resize(ids.size());
    for (const auto& [id, e] : m.edges()) {
      const auto k = src.size();
      src.push_back(index.at(e.source));
      dst.push_back(index.at(e.target));
      out_edges[src.back()].push_back(k);
      in_edges[dst.back()].push_back(k);
    }
  }

  // Nodes reachable from `from` following edges forward (or backward),
  // never expanding `blocked`.
  std::vector<bool> reach(std::size_t from, std::size_t blocked, bool forward) const {
    std::vector<bool> seen(ids.size(), false);
    std::deque<std::size_t> queue{from};
    seen[from] = true;
    while (!queue.empty()) {
      auto v = queue.front();
      queue.pop_front();
      if (v == blocked) continue;
      for (auto k : forward ? out_edges[v] : in_edges[v]) {
        auto w = forward ? dst[k] : src[k];
        if (!seen[w]) {
          seen[w] = true;
          queue.push_back(w);
        }
      }
    }
    return seen;
  }

  // Unit-capacity max flow from s to t, capped at `limit`.
  int edge_disjoint_paths(std::size_t s, std::size_t t, int limit) const {
    std::vector<int> flow(src.size(), 0);
    int found = 0;
    while (found < limit) {
      // BFS over the residual graph; parent stores (edge, forward?).
      std::vector<std::pair<std::ptrdiff_t, bool>> parent(ids.size(), {-1, true});
      std::vector<bool> seen(ids.size(), false);
      std::deque<std::size_t> queue{s};
      seen[s] = true;
      while (!queue.empty() && !seen[t]) {
        auto v = queue.front();
        queue.pop_front();
        for (auto k : out_edges[v]) {
          if (flow[k] == 0 && !seen[dst[k]]) {
            seen[dst[k]] = true;
            parent[dst[k]] = {static_cast<std::ptrdiff_t>(k), true};
            queue.push_back(dst[k]);
          }
        }
        for (auto k : in_edges[v]) {
          if (flow[k] == 1 && !seen[src[k]]) {
            seen[src[k]] = true;
            parent[src[k]] = {static_cast<std::ptrdiff_t>(k), false};
            queue.push_back(src[k]);
          }
        }
      }
      if (!seen[t]) break;
      for (auto v = t; v != s;) {
        auto [k, fwd] = parent[v];
        if (fwd) {
          flow[k] = 1;
          v = src[k];
        } else {
          flow[k] = 0;
          v = dst[k];
        }
      }
      ++found;
    }
    return found;
  }
};

std::optional<std::set<std::string>> interior_of(const ProcessModel& model, const Graph& g, std::size_t s,
                                                 std::size_t j) {
  if (s == j) return std::nullopt;
  if (!is_gateway(model.node(g.ids[s]).type) || !is_gateway(model.node(g.ids[j]).type)) return std::nullopt;
  if (g.out_edges[s].size() < 2 || g.in_edges[j].size() < 2) return std::nullopt;
  if (g.edge_disjoint_paths(s, j, 2) < 2) return std::nullopt;

  const auto from_split = g.reach(s, j, true);
  const auto to_join = g.reach(j, s, false);
  std::vector<bool> inside(g.ids.size(), false);
  for (std::size_t v = 0; v < g.ids.size(); ++v) {
    inside[v] = v != s && v != j && from_split[v] && to_join[v];
  }
  auto in_region = [&](std::size_t v) { return inside[v] || v == s || v == j; };

  for (auto k : g.out_edges[s]) {
    if (!inside[g.dst[k]] && g.dst[k] != j) return std::nullopt;
  }
  for (auto k : g.in_edges[j]) {
    if (!inside[g.src[k]] && g.src[k] != s) return std::nullopt;
  }
  for (std::size_t v = 0; v < g.ids.size(); ++v) {
    if (!inside[v]) continue;
    for (auto k : g.out_edges[v]) {
      // Interior edges may not leave the region nor loop back into the split.
      if (!in_region(g.dst[k]) || g.dst[k] == s) return std::nullopt;
    }
    for (auto k : g.in_edges[v]) {
      if (!in_region(g.src[k]) || g.src[k] == j) return std::nullopt;
    }
  }

  std::set<std::string> out;
  for (std::size_t v = 0; v < g.ids.size(); ++v) {
    if (inside[v]) out.insert(g.ids[v]);
  }
  return out;
}

}  // namespace

std::optional<std::set<std::string>> block_interior(const ProcessModel& model, const std::string& split,
                                                    const std::string& join) {
  if (!model.has_node(split) || !model.has_node(join)) return std::nullopt;
  Graph g(model);
  return interior_of(model, g, g.index.at(split), g.index.at(join));
}

std::vector<Block> detect_blocks(const ProcessModel& model, const EventLog& log) {
  if (final_model(log) != model) {
    throw std::invalid_argument("model is not the final model of the given log");
  }

  std::vector<std::pair<std::string, std::string>> pairs;
  {
    Graph g(model);
    for (std::size_t s = 0; s < g.ids.size(); ++s) {
      for (std::size_t j = 0; j < g.ids.size(); ++j) {
        if (interior_of(model, g, s, j)) pairs.emplace_back(g.ids[s], g.ids[j]);
      }
    }
  }
  if (pairs.empty()) return {};

  std::map<std::string, const ModelingEvent*> create_of;
  for (const auto& ev : log.events) {
    if (ev.event_class() == EventClass::Create && is_node_type(ev.object_type)) {
      create_of.try_emplace(ev.object_id, &ev);
    }
  }

  std::vector<Block> blocks;
  std::vector<bool> done(pairs.size(), false);
  std::size_t remaining = pairs.size();
  Replayer replayer;
  for (const auto& ev : log.events) {
    replayer.apply(ev);
    if (!Replayer::is_structural(ev)) continue;
    const auto& snapshot = replayer.model();
    Graph g(snapshot);
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      if (done[p]) continue;
      const auto& [split, join] = pairs[p];
      if (!snapshot.has_node(split) || !snapshot.has_node(join)) continue;
      auto interior = interior_of(snapshot, g, g.index.at(split), g.index.at(join));
      if (!interior) continue;

      Block b;
      b.split_id = split;
      b.join_id = join;
      interior->insert(split);
      interior->insert(join);
      b.members.assign(interior->begin(), interior->end());
      b.completion_seq = ev.seq;
      bool first = true;
      for (const auto& id : b.members) {
        const auto t = create_of.at(id)->timestamp;
        b.interval_start = first ? t : std::min(b.interval_start, t);
        b.interval_end = first ? t : std::max(b.interval_end, t);
        first = false;
      }
      b.made_as_whole = is_made_as_whole(b, log);
      blocks.push_back(std::move(b));
      done[p] = true;
      --remaining;
    }
    if (remaining == 0) break;
  }
  std::stable_sort(blocks.begin(), blocks.end(),
                   [](const Block& a, const Block& b) { return a.completion_seq < b.completion_seq; });
  return blocks;
}

std::size_t max_simul_block(std::span<const Block> blocks) {
  // Sweep: at equal instants starts are processed before ends.
  std::vector<std::pair<Timestamp, int>> points;
  points.reserve(blocks.size() * 2);
  for (const auto& b : blocks) {
    points.emplace_back(b.interval_start, 0);
    points.emplace_back(b.interval_end, 1);
  }
  std::sort(points.begin(), points.end());
  std::size_t open = 0, best = 0;
  for (const auto& [t, kind] : points) {
    if (kind == 0) best = std::max(best, ++open);
    else --open;
  }
  return best;
}

bool is_made_as_whole(const Block& block, const EventLog& log) {
  const std::set<std::string> members(block.members.begin(), block.members.end());
  std::uint64_t first = 0, last = 0;
  bool any = false;
  for (const auto& ev : log.events) {
    if (ev.event_class() != EventClass::Create || !members.contains(ev.object_id)) continue;
    if (!any) first = ev.seq;
    last = ev.seq;
    any = true;
  }
  if (!any) return false;
  for (const auto& ev : log.events) {
    if (ev.seq <= first || ev.seq >= last) continue;
    if (ev.event_class() == EventClass::Create && is_node_type(ev.object_type) && !members.contains(ev.object_id)) {
      return false;
    }
  }
  return true;
}

MaybeRational perc_blocks_as_whole(std::span<const Block> blocks, const EventLog& log) {
  if (blocks.empty()) return std::nullopt;
  std::int64_t whole = 0;
  for (const auto& b : blocks) whole += is_made_as_whole(b, log) ? 1 : 0;
  return Rational(whole, static_cast<std::int64_t>(blocks.size()));
}

Json block_to_json(const Block& block) {
  return Json{{"split", block.split_id},
              {"join", block.join_id},
              {"members", block.members},
              {"interval", {format_timestamp(block.interval_start), format_timestamp(block.interval_end)}},
              {"whole", block.made_as_whole},
              {"completion_seq", block.completion_seq}};
}

}  // namespace ppmkit
