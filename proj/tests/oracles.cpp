#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <stdexcept>

namespace oracle {

using ppmkit::Verdict;
using ppmkit::WFNet;

WFNet random_wfnet(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto pick = [&rng](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };

  const std::size_t n_trans = pick(1, 8);
  const std::size_t n_places = pick(2, 10);
  WFNet net;
  net.places.push_back("i");
  for (std::size_t k = 1; k + 1 < n_places; ++k) net.places.push_back("p" + std::to_string(k));
  net.places.push_back("o");
  net.source = 0;
  net.sink = n_places - 1;
  for (std::size_t k = 0; k < n_trans; ++k) net.transitions.push_back({"t" + std::to_string(k), "", {}, {}});

  // Chain i -> t -> p -> t -> ... -> o over the first few transitions.
  const std::size_t inner = n_places - 2;
  const std::size_t chain = std::min(n_trans, inner + 1);
  const std::size_t len = pick(1, chain);
  std::size_t prev = net.source;
  for (std::size_t k = 0; k < len; ++k) {
    net.transitions[k].inputs.push_back(prev);
    const std::size_t next = (k + 1 == len) ? net.sink : pick(1, inner);
    net.transitions[k].outputs.push_back(next);
    prev = next;
  }

  const double density = std::uniform_real_distribution<double>(1.5, 2.5)(rng);
  const auto target = static_cast<std::size_t>(std::lround(density * static_cast<double>(n_trans)));
  auto arcs = [&net] { return net.arc_count(); };
  for (int attempt = 0; arcs() < target && attempt < 200; ++attempt) {
    auto& t = net.transitions[pick(0, n_trans - 1)];
    if (pick(0, 1) == 0) {
      const std::size_t p = pick(0, n_places - 2);  // never consume from o
      if (std::find(t.inputs.begin(), t.inputs.end(), p) == t.inputs.end()) t.inputs.push_back(p);
    } else {
      const std::size_t p = pick(1, n_places - 1);  // never produce into i
      if (std::find(t.outputs.begin(), t.outputs.end(), p) == t.outputs.end()) t.outputs.push_back(p);
    }
  }
  for (auto& t : net.transitions) {
    std::sort(t.inputs.begin(), t.inputs.end());
    std::sort(t.outputs.begin(), t.outputs.end());
  }
  return net;
}

namespace {

constexpr std::int64_t kOmega = -1;
using OMarking = std::vector<std::int64_t>;

bool wf_structured(const WFNet& net) {
  const std::size_t np = net.places.size();
  const std::size_t nt = net.transitions.size();
  for (const auto& t : net.transitions) {
    for (auto p : t.outputs) if (p == net.source) return false;
    for (auto p : t.inputs) if (p == net.sink) return false;
  }
  // Nodes 0..np-1 are places, np.. are transitions.
  std::vector<std::vector<std::size_t>> fwd(np + nt), bwd(np + nt);
  for (std::size_t k = 0; k < nt; ++k) {
    for (auto p : net.transitions[k].inputs) {
      fwd[p].push_back(np + k);
      bwd[np + k].push_back(p);
    }
    for (auto p : net.transitions[k].outputs) {
      fwd[np + k].push_back(p);
      bwd[p].push_back(np + k);
    }
  }
  auto reach = [&](std::size_t from, const std::vector<std::vector<std::size_t>>& g) {
    std::vector<char> seen(np + nt, 0);
    std::vector<std::size_t> stack{from};
    seen[from] = 1;
    while (!stack.empty()) {
      auto v = stack.back();
      stack.pop_back();
      for (auto w : g[v]) {
        if (!seen[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
      }
    }
    return seen;
  };
  const auto a = reach(net.source, fwd);
  const auto b = reach(net.sink, bwd);
  for (std::size_t v = 0; v < np + nt; ++v) {
    if (!a[v] || !b[v]) return false;
  }
  return true;
}

bool enabled(const ppmkit::Transition& t, const OMarking& m) {
  for (auto p : t.inputs) {
    if (m[p] != kOmega && m[p] < 1) return false;
  }
  return true;
}

OMarking fire(const ppmkit::Transition& t, OMarking m) {
  for (auto p : t.inputs) if (m[p] != kOmega) --m[p];
  for (auto p : t.outputs) if (m[p] != kOmega) ++m[p];
  return m;
}

bool leq(const OMarking& a, const OMarking& b) {
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (b[k] == kOmega) continue;
    if (a[k] == kOmega || a[k] > b[k]) return false;
  }
  return true;
}

// Karp-Miller tree; true when some place gets an omega.
bool unbounded(const WFNet& net) {
  struct TreeNode {
    OMarking m;
    int parent;
  };
  std::vector<TreeNode> tree;
  OMarking init(net.places.size(), 0);
  init[net.source] = 1;
  tree.push_back({init, -1});
  std::set<OMarking> processed;
  std::deque<int> work{0};
  while (!work.empty()) {
    const int v = work.front();
    work.pop_front();
    if (!processed.insert(tree[v].m).second) continue;
    for (const auto& t : net.transitions) {
      if (!enabled(t, tree[v].m)) continue;
      OMarking m = fire(t, tree[v].m);
      for (int a = v; a >= 0; a = tree[a].parent) {
        const auto& anc = tree[a].m;
        if (leq(anc, m) && anc != m) {
          for (std::size_t k = 0; k < m.size(); ++k) {
            if (m[k] != kOmega && anc[k] != kOmega && m[k] > anc[k]) m[k] = kOmega;
          }
        }
      }
      if (std::find(m.begin(), m.end(), kOmega) != m.end()) return true;
      tree.push_back({std::move(m), v});
      work.push_back(static_cast<int>(tree.size()) - 1);
    }
  }
  return false;
}

}  // namespace

Verdict brute_force_soundness(const WFNet& net) {
  if (!wf_structured(net)) return Verdict::Unsound;
  if (unbounded(net)) return Verdict::Unsound;

  OMarking init(net.places.size(), 0);
  init[net.source] = 1;
  OMarking final_m(net.places.size(), 0);
  final_m[net.sink] = 1;

  std::map<OMarking, std::size_t> index;
  std::vector<OMarking> states;
  std::vector<std::vector<std::size_t>> edges;
  std::vector<char> fired(net.transitions.size(), 0);
  index[init] = 0;
  states.push_back(init);
  edges.emplace_back();
  for (std::size_t s = 0; s < states.size(); ++s) {
    for (std::size_t k = 0; k < net.transitions.size(); ++k) {
      if (!enabled(net.transitions[k], states[s])) continue;
      fired[k] = 1;
      auto m = fire(net.transitions[k], states[s]);
      auto [it, fresh] = index.emplace(m, states.size());
      if (fresh) {
        states.push_back(std::move(m));
        edges.emplace_back();
      }
      edges[s].push_back(it->second);
    }
  }

  // (c) no dead transitions
  if (std::find(fired.begin(), fired.end(), 0) != fired.end()) return Verdict::Unsound;
  // (b) proper completion
  for (const auto& m : states) {
    if (m[net.sink] > 0 && m != final_m) return Verdict::Unsound;
  }
  // (a) option to complete, checked per state by forward search
  for (std::size_t s = 0; s < states.size(); ++s) {
    std::vector<char> seen(states.size(), 0);
    std::vector<std::size_t> stack{s};
    seen[s] = 1;
    bool found = false;
    while (!stack.empty() && !found) {
      auto v = stack.back();
      stack.pop_back();
      if (states[v] == final_m) found = true;
      for (auto w : edges[v]) {
        if (!seen[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
      }
    }
    if (!found) return Verdict::Unsound;
  }
  return Verdict::Sound;
}

bool isomorphic_modulo_fresh(const ppmkit::ProcessModel& got, const ppmkit::ProcessModel& expected,
                             std::string* why) {
  auto fail = [why](std::string msg) {
    if (why) *why = std::move(msg);
    return false;
  };
  if (got.nodes().size() != expected.nodes().size()) {
    return fail("node counts differ: " + std::to_string(got.nodes().size()) + " vs " +
                std::to_string(expected.nodes().size()));
  }
  if (got.edges().size() != expected.edges().size()) {
    return fail("edge counts differ: " + std::to_string(got.edges().size()) + " vs " +
                std::to_string(expected.edges().size()));
  }
  std::vector<std::string> free_got, free_exp;
  for (const auto& [id, n] : got.nodes()) {
    if (expected.has_node(id)) {
      if (expected.node(id).type != n.type) return fail("type of " + id + " differs");
    } else {
      free_got.push_back(id);
    }
  }
  for (const auto& [id, n] : expected.nodes()) {
    if (!got.has_node(id)) free_exp.push_back(id);
  }

  std::multiset<std::pair<std::string, std::string>> want;
  for (const auto& [id, e] : expected.edges()) want.emplace(e.source, e.target);

  std::sort(free_got.begin(), free_got.end());
  do {
    std::map<std::string, std::string> rename;
    bool types_ok = true;
    for (std::size_t k = 0; k < free_got.size(); ++k) {
      rename[free_got[k]] = free_exp[k];
      if (got.node(free_got[k]).type != expected.node(free_exp[k]).type) types_ok = false;
    }
    if (!types_ok) continue;
    auto map_id = [&rename](const std::string& id) {
      auto it = rename.find(id);
      return it == rename.end() ? id : it->second;
    };
    std::multiset<std::pair<std::string, std::string>> have;
    for (const auto& [id, e] : got.edges()) have.emplace(map_id(e.source), map_id(e.target));
    if (have == want) return true;
  } while (std::next_permutation(free_got.begin(), free_got.end()));
  return fail("no renaming of fresh nodes matches the expected flows");
}

namespace {

double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
               double whole, double eps, int depth) {
  const double m = (a + b) / 2;
  const double lm = (a + m) / 2, rm = (m + b) / 2;
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6 * (fa + 4 * flm + fm);
  const double right = (b - m) / 6 * (fm + 4 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15 * eps) return left + right + (left + right - whole) / 15;
  return simpson(f, a, m, fa, flm, fm, left, eps / 2, depth - 1) +
         simpson(f, m, b, fm, frm, fb, right, eps / 2, depth - 1);
}

}  // namespace

double t_two_tailed_p_numeric(double t, double df) {
  const double c = std::exp(std::lgamma((df + 1) / 2) - std::lgamma(df / 2)) / std::sqrt(df * std::numbers::pi);
  auto pdf = [c, df](double x) { return c * std::pow(1 + x * x / df, -(df + 1) / 2); };
  const double a = 0, b = std::abs(t);
  if (b == 0) return 1.0;
  const double fa = pdf(a), fb = pdf(b), fm = pdf(b / 2);
  const double whole = b / 6 * (fa + 4 * fm + fb);
  const double central = simpson(pdf, a, b, fa, fm, fb, whole, 1e-13, 50);
  return 1 - 2 * central;
}

ppmkit::ProcessModel build_model(const std::vector<std::string>& nodes, const std::vector<std::string>& edges) {
  static const std::map<std::string, ppmkit::NodeType> types{
      {"start", ppmkit::NodeType::StartEvent}, {"end", ppmkit::NodeType::EndEvent},
      {"task", ppmkit::NodeType::Activity},    {"xor", ppmkit::NodeType::Xor},
      {"and", ppmkit::NodeType::And}};
  ppmkit::ProcessModel m;
  for (const auto& spec : nodes) {
    const auto colon = spec.find(':');
    m.add_node({spec.substr(0, colon), types.at(spec.substr(colon + 1)), "", {}});
  }
  int k = 0;
  for (const auto& spec : edges) {
    const auto gt = spec.find('>');
    m.add_edge({"f" + std::to_string(++k), spec.substr(0, gt), spec.substr(gt + 1), "", {}});
  }
  return m;
}

std::vector<NormalizeCase> normalize_cases() {
  std::vector<NormalizeCase> cases;
  // Two start events whose paths meet in one AND-join: the merged start is
  // followed by an AND-split.
  cases.push_back({"start_events_common_and",
                   build_model({"S1:start", "S2:start", "A:task", "B:task", "J:and", "C:task", "E:end"},
                               {"S1>A", "S2>B", "A>J", "B>J", "J>C", "C>E"}),
                   build_model({"new_s:start", "new_g:and", "A:task", "B:task", "J:and", "C:task", "E:end"},
                               {"new_s>new_g", "new_g>A", "new_g>B", "A>J", "B>J", "J>C", "C>E"})});
  // Three start events meeting in two different gateways: XOR by default.
  cases.push_back(
      {"start_events_default_xor",
       build_model({"S1:start", "S2:start", "S3:start", "A:task", "B:task", "C:task", "D:task", "J1:and", "J2:xor",
                    "E:end"},
                   {"S1>A", "S2>B", "S3>C", "A>J1", "B>J1", "J1>J2", "C>J2", "J2>D", "D>E"}),
       build_model({"new_s:start", "new_g:xor", "A:task", "B:task", "C:task", "D:task", "J1:and", "J2:xor", "E:end"},
                   {"new_s>new_g", "new_g>A", "new_g>B", "new_g>C", "A>J1", "B>J1", "J1>J2", "C>J2", "J2>D",
                    "D>E"})});
  // Two end events reached from one AND-split: merged behind an AND-join.
  cases.push_back({"end_events_common_and",
                   build_model({"S:start", "X:and", "A:task", "B:task", "E1:end", "E2:end"},
                               {"S>X", "X>A", "X>B", "A>E1", "B>E2"}),
                   build_model({"S:start", "X:and", "A:task", "B:task", "new_g:and", "new_e:end"},
                               {"S>X", "X>A", "X>B", "A>new_g", "B>new_g", "new_g>new_e"})});
  // A task without incoming flow gets its own start event, which is then
  // merged with the existing one.
  cases.push_back({"task_without_incoming_flow",
                   build_model({"S:start", "A:task", "B:task", "J:and", "E:end"}, {"S>A", "A>J", "B>J", "J>E"}),
                   build_model({"new_s:start", "new_g:and", "A:task", "B:task", "J:and", "E:end"},
                               {"new_s>new_g", "new_g>A", "new_g>B", "A>J", "B>J", "J>E"})});
  // Both incoming flows originate from one AND-split: AND-join copied.
  cases.push_back({"join_common_and_split",
                   build_model({"S:start", "X:and", "A:task", "B:task", "C:task", "E:end"},
                               {"S>X", "X>A", "X>B", "A>C", "B>C", "C>E"}),
                   build_model({"S:start", "X:and", "A:task", "B:task", "new_j:and", "C:task", "E:end"},
                               {"S>X", "X>A", "X>B", "A>new_j", "B>new_j", "new_j>C", "C>E"})});
  // Incoming flows from two different splits: no split qualifies, XOR-join.
  cases.push_back({"join_default_xor",
                   build_model({"S:start", "X1:and", "A:task", "B:task", "Y:xor", "D:task", "C:task", "E:end"},
                               {"S>X1", "X1>A", "X1>B", "B>Y", "A>C", "Y>C", "Y>D", "D>C", "C>E"}),
                   build_model({"S:start", "X1:and", "A:task", "B:task", "Y:xor", "D:task", "new_j:xor", "C:task",
                                "E:end"},
                               {"S>X1", "X1>A", "X1>B", "B>Y", "A>new_j", "Y>new_j", "Y>D", "D>new_j", "new_j>C",
                                "C>E"})});
  return cases;
}

}  // namespace oracle
