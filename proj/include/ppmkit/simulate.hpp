#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ppmkit/eventlog.hpp"
#include "ppmkit/model.hpp"

namespace ppmkit {

/// A model to be "drawn" plus the order in which a tidy modeler would
/// create its nodes, one group per block or sequence segment.
struct ModelTemplate {
  ProcessModel model;
  std::vector<std::vector<std::string>> groups;
};

/// Three blocks (AND, XOR, AND) between a start and an end event, in the
/// spirit of an aircraft pre-flight process.
ModelTemplate preflight_template();

struct SimulationProfile {
  std::string name = "structured";
  /// Chance that the next node is taken from another group than the one in
  /// progress.
  double block_interleave_prob = 0.0;
  /// Expected moves per created object.
  double move_rate = 0.3;
  /// Mean gap between actions, seconds.
  double mean_gap = 4.0;
  /// Chance to flip the type of one join gateway, making the model unsound.
  double defect_prob = 0.0;
  /// Chance to create, move and later delete a stray activity.
  double stray_prob = 0.0;
  /// Moves happen in a layout phase after all creates instead of right
  /// after each create.
  bool late_moves = false;
  /// Edges are created once all nodes exist instead of as soon as both
  /// endpoints do.
  bool late_edges = false;
  std::uint64_t seed = 0;
};

/// Named presets: structured, chaotic, slow, fast. Throws
/// std::invalid_argument for other names.
SimulationProfile profile_preset(const std::string& name, std::uint64_t seed = 0);

/// Throws std::invalid_argument for probabilities outside [0, 1], a
/// negative move rate or a non-positive gap.
void validate_profile(const SimulationProfile& profile);

/// Deterministic for a fixed profile (including seed). Randomness comes from
/// std::mt19937_64 seeded with `profile.seed`; uniform reals take the top 53
/// bits of a draw and exponential gaps use inversion, so any port using the
/// same generator reproduces the logs.
EventLog simulate(const SimulationProfile& profile, const std::string& session_id = "session",
                  const ModelTemplate& model_template = preflight_template());

/// Seed used for session `index` of a cohort: splitmix64(seed + index).
std::uint64_t session_seed(std::uint64_t seed, std::uint64_t index);

/// `count` sessions named "<profile>-NNN".
std::vector<EventLog> simulate_cohort(const SimulationProfile& profile, std::size_t count, std::uint64_t seed);

}  // namespace ppmkit
