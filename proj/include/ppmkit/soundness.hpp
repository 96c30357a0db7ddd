#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ppmkit/json.hpp"
#include "ppmkit/wfnet.hpp"

namespace ppmkit {

inline constexpr std::size_t kDefaultMaxStates = 100'000;

enum class Verdict { Sound, Unsound, Unknown };

enum class ViolationKind {
  NotWFStructured,
  DeadlockNoCompletion,
  ImproperCompletion,
  DeadTransition,
  Unbounded,
  StateSpaceExceeded,
};

std::string_view to_string(Verdict v);
std::string_view to_string(ViolationKind k);

struct Violation {
  ViolationKind kind;
  /// Offending marking, when the violation is about a state.
  std::optional<Marking> marking;
  /// Offending node ids (dead transition, non-WF nodes).
  std::vector<std::string> nodes;
  /// Shortest firing sequence from the initial marking to `marking`.
  std::vector<std::string> trace;
};

struct SoundnessReport {
  Verdict verdict = Verdict::Unknown;
  std::vector<Violation> violations;
  std::size_t states_explored = 0;

  bool sound() const { return verdict == Verdict::Sound; }
};

/// Classical soundness by breadth-first exploration from [i]: option to
/// complete, proper completion and no dead transitions. A marking that
/// strictly covers an ancestor on its generation path proves unboundedness.
/// More than `max_states` reachable markings yield Unknown.
SoundnessReport check_soundness(const WFNet& net, std::size_t max_states = kDefaultMaxStates);

/// Renders a marking as "p1+2*p2" (empty marking: "0").
std::string format_marking(const WFNet& net, const Marking& m);

Json soundness_to_json(const WFNet& net, const SoundnessReport& report);

}  // namespace ppmkit
