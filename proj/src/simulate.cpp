#include "ppmkit/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

#include <fmt/format.h>

namespace ppmkit {

namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return uniform() < p; }
  std::size_t index(std::size_t n) { return std::min(n - 1, static_cast<std::size_t>(uniform() * static_cast<double>(n))); }
  double exponential(double mean) { return -mean * std::log1p(-uniform()); }

  int poisson(double lambda) {
    if (lambda <= 0) return 0;
    const double limit = std::exp(-lambda);
    int k = 0;
    double p = 1;
    do {
      ++k;
      p *= uniform();
    } while (p > limit);
    return k - 1;
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[index(i)]);
  }

 private:
  std::mt19937_64 gen_;
};

EventKind create_kind(NodeType t) {
  switch (t) {
    case NodeType::StartEvent: return EventKind::CreateStartEvent;
    case NodeType::EndEvent: return EventKind::CreateEndEvent;
    case NodeType::Activity: return EventKind::CreateActivity;
    case NodeType::Xor: return EventKind::CreateXor;
    case NodeType::And: return EventKind::CreateAnd;
  }
  throw std::logic_error("node type");
}

EventKind move_kind(NodeType t) {
  switch (t) {
    case NodeType::StartEvent: return EventKind::MoveStartEvent;
    case NodeType::EndEvent: return EventKind::MoveEndEvent;
    case NodeType::Activity: return EventKind::MoveActivity;
    case NodeType::Xor: return EventKind::MoveXor;
    case NodeType::And: return EventKind::MoveAnd;
  }
  throw std::logic_error("node type");
}

class LogBuilder {
 public:
  LogBuilder(std::string session_id, Rng& rng, double mean_gap) : rng_(rng), mean_gap_(mean_gap) {
    log_.session_id = std::move(session_id);
    now_ = parse_timestamp("2010-11-15T09:00:00.000Z");
  }

  void emit(EventKind kind, const std::string& id, std::optional<Point> pos = std::nullopt,
            std::optional<std::string> label = std::nullopt, std::optional<std::string> source = std::nullopt,
            std::optional<std::string> target = std::nullopt) {
    if (!log_.events.empty()) advance(mean_gap_);
    ModelingEvent ev;
    ev.seq = log_.events.size() + 1;
    ev.timestamp = now_;
    ev.kind = kind;
    ev.object_id = id;
    ev.object_type = object_type_of(kind);
    ev.position = pos;
    ev.label = std::move(label);
    ev.source_id = std::move(source);
    ev.target_id = std::move(target);
    log_.events.push_back(std::move(ev));
  }

  EventLog take() { return std::move(log_); }

 private:
  void advance(double mean) {
    const double gap = std::max(0.2, rng_.exponential(mean));
    now_ += Duration(static_cast<std::int64_t>(std::llround(gap * 1000.0)));
  }

  Rng& rng_;
  double mean_gap_;
  EventLog log_;
  Timestamp now_;
};

Point jitter(Rng& rng, Point p) {
  auto step = [&]() { return static_cast<std::int64_t>(rng.index(81)) - 40; };
  return Point{p.x + step(), p.y + step()};
}

}  // namespace

ModelTemplate preflight_template() {
  ModelTemplate t;
  auto& m = t.model;
  auto node = [&](const char* id, NodeType type, const char* label, std::int64_t x, std::int64_t y) {
    m.add_node(Node{id, type, label, Point{x, y}});
  };
  node("start", NodeType::StartEvent, "", 40, 200);
  node("a1", NodeType::Activity, "Request clearance", 140, 200);
  node("s1", NodeType::And, "", 260, 200);
  node("b1", NodeType::Activity, "Check fuel", 360, 140);
  node("b2", NodeType::Activity, "Check weather", 360, 260);
  node("j1", NodeType::And, "", 460, 200);
  node("s2", NodeType::Xor, "", 560, 200);
  node("c1", NodeType::Activity, "Board via gate", 660, 140);
  node("c2", NodeType::Activity, "Board via bus", 660, 260);
  node("j2", NodeType::Xor, "", 760, 200);
  node("a2", NodeType::Activity, "Close doors", 860, 200);
  node("s3", NodeType::And, "", 960, 200);
  node("d1", NodeType::Activity, "Push back", 1060, 140);
  node("d2", NodeType::Activity, "Final checklist", 1060, 260);
  node("j3", NodeType::And, "", 1160, 200);
  node("end", NodeType::EndEvent, "", 1260, 200);
  const std::pair<const char*, const char*> flows[] = {
      {"start", "a1"}, {"a1", "s1"}, {"s1", "b1"}, {"s1", "b2"}, {"b1", "j1"}, {"b2", "j1"},
      {"j1", "s2"},    {"s2", "c1"}, {"s2", "c2"}, {"c1", "j2"}, {"c2", "j2"}, {"j2", "a2"},
      {"a2", "s3"},    {"s3", "d1"}, {"s3", "d2"}, {"d1", "j3"}, {"d2", "j3"}, {"j3", "end"},
  };
  int k = 1;
  for (const auto& [from, to] : flows) m.add_edge(Edge{fmt::format("f{:02}", k++), from, to, "", {}});
  t.groups = {{"start", "a1"}, {"s1", "b1", "b2", "j1"}, {"s2", "c1", "c2", "j2"},
              {"a2"},          {"s3", "d1", "d2", "j3"}, {"end"}};
  return t;
}

SimulationProfile profile_preset(const std::string& name, std::uint64_t seed) {
  SimulationProfile p;
  p.name = name;
  p.seed = seed;
  if (name == "structured") {
    p.block_interleave_prob = 0.0;
    p.move_rate = 0.3;
    p.mean_gap = 4.0;
  } else if (name == "chaotic") {
    p.block_interleave_prob = 0.6;
    p.move_rate = 1.5;
    p.mean_gap = 9.0;
    p.defect_prob = 0.7;
    p.stray_prob = 0.5;
    p.late_moves = true;
    p.late_edges = true;
  } else if (name == "slow") {
    p.block_interleave_prob = 0.1;
    p.move_rate = 0.5;
    p.mean_gap = 15.0;
  } else if (name == "fast") {
    p.block_interleave_prob = 0.0;
    p.move_rate = 0.1;
    p.mean_gap = 1.5;
  } else {
    throw std::invalid_argument(fmt::format("unknown profile {}", name));
  }
  return p;
}

void validate_profile(const SimulationProfile& p) {
  auto prob = [](double v, const char* what) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument(fmt::format("{} must be in [0, 1]", what));
  };
  prob(p.block_interleave_prob, "block_interleave_prob");
  prob(p.defect_prob, "defect_prob");
  prob(p.stray_prob, "stray_prob");
  if (!(p.move_rate >= 0.0)) throw std::invalid_argument("move_rate must be non-negative");
  if (!(p.mean_gap > 0.0)) throw std::invalid_argument("mean_gap must be positive");
}

EventLog simulate(const SimulationProfile& profile, const std::string& session_id, const ModelTemplate& tmpl) {
  validate_profile(profile);
  Rng rng(profile.seed);
  ProcessModel model = tmpl.model;

  if (rng.chance(profile.defect_prob)) {
    std::vector<std::string> joins;
    for (const auto& [id, n] : model.nodes()) {
      if (is_gateway(n.type) && model.in_degree(id) >= 2) joins.push_back(id);
    }
    if (!joins.empty()) {
      auto& n = model.node(joins[rng.index(joins.size())]);
      n.type = n.type == NodeType::And ? NodeType::Xor : NodeType::And;
    }
  }

  // Node creation order.
  std::vector<std::vector<std::string>> queues = tmpl.groups;
  std::vector<std::string> order;
  std::size_t current = 0;
  auto non_empty = [&]() {
    std::vector<std::size_t> out;
    for (std::size_t g = 0; g < queues.size(); ++g) {
      if (!queues[g].empty()) out.push_back(g);
    }
    return out;
  };
  for (auto open = non_empty(); !open.empty(); open = non_empty()) {
    if (queues[current].empty()) current = open.front();
    std::size_t from = current;
    if (open.size() > 1 && rng.chance(profile.block_interleave_prob)) {
      std::vector<std::size_t> others;
      for (auto g : open) {
        if (g != current) others.push_back(g);
      }
      from = others[rng.index(others.size())];
    }
    order.push_back(queues[from].front());
    queues[from].erase(queues[from].begin());
  }

  const bool stray = rng.chance(profile.stray_prob);
  const std::size_t stray_at = stray ? 1 + rng.index(order.size() - 1) : order.size();
  const std::string stray_id = model.fresh_id("stray");

  LogBuilder out(session_id, rng, profile.mean_gap);
  std::set<std::string> created;
  std::vector<std::string> created_edges;
  auto emit_edges_ready = [&]() {
    for (const auto& [id, e] : model.edges()) {
      if (created.contains(id) || !created.contains(e.source) || !created.contains(e.target)) continue;
      out.emit(EventKind::CreateEdge, id, std::nullopt, std::nullopt, e.source, e.target);
      created.insert(id);
      created_edges.push_back(id);
    }
  };
  auto emit_node_moves = [&](const std::string& id, int count) {
    auto& n = model.node(id);
    for (int i = 0; i < count; ++i) {
      n.position = jitter(rng, n.position);
      out.emit(move_kind(n.type), id, n.position);
    }
  };

  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i == stray_at) {
      out.emit(EventKind::CreateActivity, stray_id, Point{700, 400});
      out.emit(EventKind::NameActivity, stray_id, std::nullopt, std::string("Refuel"));
      out.emit(EventKind::MoveActivity, stray_id, Point{720, 420});
    }
    const auto& n = model.node(order[i]);
    out.emit(create_kind(n.type), n.id, n.position);
    created.insert(n.id);
    if (n.type == NodeType::Activity) out.emit(EventKind::NameActivity, n.id, std::nullopt, n.label);
    if (!profile.late_moves) emit_node_moves(n.id, rng.poisson(profile.move_rate));
    if (!profile.late_edges) emit_edges_ready();
  }

  if (profile.late_edges) {
    std::vector<std::string> pending;
    for (const auto& [id, e] : model.edges()) pending.push_back(id);
    rng.shuffle(pending);
    for (const auto& id : pending) {
      const auto& e = model.edge(id);
      out.emit(EventKind::CreateEdge, id, std::nullopt, std::nullopt, e.source, e.target);
      created.insert(id);
      created_edges.push_back(id);
    }
  }
  if (stray) out.emit(EventKind::DeleteActivity, stray_id);

  if (profile.late_moves) {
    std::vector<std::string> moves;
    for (const auto& id : order) {
      for (int k = rng.poisson(profile.move_rate); k > 0; --k) moves.push_back(id);
    }
    for (const auto& id : created_edges) {
      for (int k = rng.poisson(profile.move_rate / 3); k > 0; --k) moves.push_back(id);
    }
    rng.shuffle(moves);
    std::set<std::string> bent;
    for (const auto& id : moves) {
      if (model.has_node(id)) {
        emit_node_moves(id, 1);
      } else {
        const auto kind = bent.insert(id).second ? EventKind::CreateEdgeBendpoint : EventKind::MoveEdgeBendpoint;
        out.emit(kind, id, jitter(rng, Point{400, 300}));
      }
    }
  }
  return out.take();
}

std::uint64_t session_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + index + 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::vector<EventLog> simulate_cohort(const SimulationProfile& profile, std::size_t count, std::uint64_t seed) {
  std::vector<EventLog> logs;
  logs.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    SimulationProfile p = profile;
    p.seed = session_seed(seed, k);
    logs.push_back(simulate(p, fmt::format("{}-{:03}", profile.name, k + 1)));
  }
  return logs;
}

}  // namespace ppmkit
