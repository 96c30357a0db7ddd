#include "ppmkit/soundness.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

#include <boost/functional/hash.hpp>
#include <fmt/format.h>

namespace ppmkit {

namespace {

struct MarkingHash {
  std::size_t operator()(const Marking& m) const { return boost::hash_range(m.begin(), m.end()); }
};

bool enabled(const Transition& t, const Marking& m) {
  return std::all_of(t.inputs.begin(), t.inputs.end(), [&](std::size_t p) { return m[p] > 0; });
}

Marking fire(const Transition& t, Marking m) {
  for (auto p : t.inputs) --m[p];
  for (auto p : t.outputs) ++m[p];
  return m;
}

bool strictly_covers(const Marking& big, const Marking& small) {
  bool strict = false;
  for (std::size_t p = 0; p < big.size(); ++p) {
    if (big[p] < small[p]) return false;
    strict |= big[p] > small[p];
  }
  return strict;
}

class Explorer {
 public:
  Explorer(const WFNet& net, std::size_t max_states) : net_(net), max_states_(max_states) {}

  SoundnessReport run() {
    SoundnessReport report;
    Marking initial(net_.places.size(), 0);
    initial[net_.source] = 1;
    add_state(std::move(initial), kNone, kNone);

    std::vector<bool> ever_enabled(net_.transitions.size(), false);
    for (std::size_t s = 0; s < states_.size(); ++s) {
      for (std::size_t t = 0; t < net_.transitions.size(); ++t) {
        const auto& tr = net_.transitions[t];
        if (!enabled(tr, states_[s])) continue;
        ever_enabled[t] = true;
        Marking next = fire(tr, states_[s]);
        auto it = index_.find(next);
        if (it != index_.end()) {
          succ_[s].push_back(it->second);
          continue;
        }
        for (std::size_t a = s; a != kNone; a = parent_[a]) {
          if (strictly_covers(next, states_[a])) {
            auto trace = trace_to(s);
            trace.push_back(tr.id);
            report.verdict = Verdict::Unsound;
            report.violations.push_back(Violation{ViolationKind::Unbounded, next, {}, std::move(trace)});
            report.states_explored = states_.size();
            return report;
          }
        }
        if (states_.size() >= max_states_) {
          report.verdict = Verdict::Unknown;
          report.violations.push_back(Violation{ViolationKind::StateSpaceExceeded, std::nullopt, {}, {}});
          report.states_explored = states_.size();
          return report;
        }
        const auto id = add_state(std::move(next), s, t);
        succ_[s].push_back(id);
      }
    }
    report.states_explored = states_.size();

    Marking final_marking(net_.places.size(), 0);
    final_marking[net_.sink] = 1;

    for (std::size_t s = 0; s < states_.size(); ++s) {
      if (states_[s][net_.sink] > 0 && states_[s] != final_marking) {
        report.violations.push_back(Violation{ViolationKind::ImproperCompletion, states_[s], {}, trace_to(s)});
        break;
      }
    }

    // Backward search from the final marking over the reachability graph.
    std::vector<bool> completes(states_.size(), false);
    if (auto it = index_.find(final_marking); it != index_.end()) {
      std::vector<std::vector<std::size_t>> pred(states_.size());
      for (std::size_t s = 0; s < states_.size(); ++s) {
        for (auto d : succ_[s]) pred[d].push_back(s);
      }
      std::deque<std::size_t> queue{it->second};
      completes[it->second] = true;
      while (!queue.empty()) {
        auto v = queue.front();
        queue.pop_front();
        for (auto u : pred[v]) {
          if (!completes[u]) {
            completes[u] = true;
            queue.push_back(u);
          }
        }
      }
    }
    std::optional<std::size_t> stuck;
    for (std::size_t s = 0; s < states_.size(); ++s) {
      if (completes[s]) continue;
      if (succ_[s].empty()) {
        stuck = s;
        break;
      }
      if (!stuck) stuck = s;
    }
    if (stuck) {
      report.violations.push_back(
          Violation{ViolationKind::DeadlockNoCompletion, states_[*stuck], {}, trace_to(*stuck)});
    }

    std::vector<std::string> dead;
    for (std::size_t t = 0; t < net_.transitions.size(); ++t) {
      if (!ever_enabled[t]) dead.push_back(net_.transitions[t].id);
    }
    if (!dead.empty()) {
      report.violations.push_back(Violation{ViolationKind::DeadTransition, std::nullopt, std::move(dead), {}});
    }

    report.verdict = report.violations.empty() ? Verdict::Sound : Verdict::Unsound;
    return report;
  }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  std::size_t add_state(Marking m, std::size_t parent, std::size_t via) {
    const auto id = states_.size();
    index_.emplace(m, id);
    states_.push_back(std::move(m));
    parent_.push_back(parent);
    via_.push_back(via);
    succ_.emplace_back();
    return id;
  }

  std::vector<std::string> trace_to(std::size_t s) const {
    std::vector<std::string> trace;
    for (; parent_[s] != kNone; s = parent_[s]) trace.push_back(net_.transitions[via_[s]].id);
    std::reverse(trace.begin(), trace.end());
    return trace;
  }

  const WFNet& net_;
  std::size_t max_states_;
  std::vector<Marking> states_;
  std::unordered_map<Marking, std::size_t, MarkingHash> index_;
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> via_;
  std::vector<std::vector<std::size_t>> succ_;
};

}  // namespace

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Sound: return "Sound";
    case Verdict::Unsound: return "Unsound";
    case Verdict::Unknown: return "Unknown";
  }
  return "?";
}

std::string_view to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::NotWFStructured: return "NotWFStructured";
    case ViolationKind::DeadlockNoCompletion: return "DeadlockNoCompletion";
    case ViolationKind::ImproperCompletion: return "ImproperCompletion";
    case ViolationKind::DeadTransition: return "DeadTransition";
    case ViolationKind::Unbounded: return "Unbounded";
    case ViolationKind::StateSpaceExceeded: return "StateSpaceExceeded";
  }
  return "?";
}

SoundnessReport check_soundness(const WFNet& net, std::size_t max_states) {
  if (max_states < 1) throw std::invalid_argument("max_states must be at least 1");
  if (auto wf = is_wf_structured(net); !wf.ok) {
    SoundnessReport report;
    report.verdict = Verdict::Unsound;
    report.violations.push_back(Violation{ViolationKind::NotWFStructured, std::nullopt, std::move(wf.offending), {}});
    return report;
  }
  return Explorer(net, max_states).run();
}

std::string format_marking(const WFNet& net, const Marking& m) {
  std::string out;
  for (std::size_t p = 0; p < m.size(); ++p) {
    if (m[p] == 0) continue;
    if (!out.empty()) out += "+";
    if (m[p] > 1) out += fmt::format("{}*", m[p]);
    out += net.places[p];
  }
  return out.empty() ? "0" : out;
}

Json soundness_to_json(const WFNet& net, const SoundnessReport& report) {
  Json violations = Json::array();
  for (const auto& v : report.violations) {
    Json jv;
    jv["kind"] = std::string(to_string(v.kind));
    if (v.marking) jv["marking"] = format_marking(net, *v.marking);
    if (!v.nodes.empty()) jv["nodes"] = v.nodes;
    if (v.marking) jv["trace"] = v.trace;
    violations.push_back(std::move(jv));
  }
  return Json{{"verdict", std::string(to_string(report.verdict))},
              {"violations", std::move(violations)},
              {"states_explored", report.states_explored}};
}

}  // namespace ppmkit
