#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ppmkit/model.hpp"
#include "ppmkit/soundness.hpp"
#include "ppmkit/wfnet.hpp"

namespace oracle {

/// Random net on places i, p1.., o: a transition chain from i to o, plus
/// random extra arcs. Arc count per transition is drawn from [1.5, 2.5].
ppmkit::WFNet random_wfnet(std::uint64_t seed);

/// Soundness decided straight from the definition: Karp-Miller coverability
/// for boundedness, then the complete reachability graph for option to
/// complete, proper completion and dead transitions.
ppmkit::Verdict brute_force_soundness(const ppmkit::WFNet& net);

/// Isomorphism of two models where nodes whose id appears in both are fixed
/// and every other node may be renamed. Node types and the multiset of
/// (source, target) pairs must agree. On failure `why` says what differs.
bool isomorphic_modulo_fresh(const ppmkit::ProcessModel& got, const ppmkit::ProcessModel& expected,
                             std::string* why = nullptr);

/// Two-tailed p-value of Student's t by adaptive Simpson integration of the
/// density.
double t_two_tailed_p_numeric(double t, double df);

/// Small model builder: nodes as "id:TYPE", edges as "src>dst".
ppmkit::ProcessModel build_model(const std::vector<std::string>& nodes, const std::vector<std::string>& edges);

struct NormalizeCase {
  std::string name;
  ppmkit::ProcessModel input;
  ppmkit::ProcessModel expected;
};

/// Golden start/end and split/join normalization cases.
std::vector<NormalizeCase> normalize_cases();

}  // namespace oracle
