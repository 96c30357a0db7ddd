#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ppmkit/json.hpp"
#include "ppmkit/model.hpp"

namespace ppmkit {

enum class RejectionKind { MixedGateway, MissingStartEvent, MissingEndEvent };

std::string_view to_string(RejectionKind kind);

struct Rejection {
  RejectionKind kind;
  std::string reason;
  std::vector<std::string> nodes;
};

struct AppliedRule {
  std::string rule;
  std::vector<std::string> nodes;
  friend bool operator==(const AppliedRule&, const AppliedRule&) = default;
};

/// Either a normalized model or a rejection, plus the rules that fired.
struct NormalizationOutcome {
  std::optional<ProcessModel> model;
  std::optional<Rejection> rejection;
  std::vector<AppliedRule> applied_rules;

  bool rejected() const { return rejection.has_value(); }
};

/// Gateways with >= 2 incoming and >= 2 outgoing edges.
std::optional<Rejection> check_mixed_gateways(const ProcessModel& model);

/// Gives every activity without incoming (outgoing) flows its own start
/// (end) event, then merges multiple start (end) events into one start (end)
/// event followed (preceded) by a gateway. That gateway copies the sign of
/// the single gateway where all start paths first merge (all end paths
/// originate); otherwise it is an XOR. Throws std::invalid_argument on an
/// empty model.
ProcessModel normalize_start_end(const ProcessModel& model, std::vector<AppliedRule>* applied = nullptr);

/// Activities and events with several incoming (outgoing) flows get a fresh
/// join (split) gateway in front of (behind) them. Joins default to XOR and
/// splits to AND, unless all flows come from (go to) one common gateway, in
/// which case its sign is copied.
ProcessModel normalize_splits_joins(const ProcessModel& model, std::vector<AppliedRule>* applied = nullptr);

/// Mixed-gateway check, then start/end handling, then split/join handling.
NormalizationOutcome normalize(const ProcessModel& model);

Json normalization_to_json(const NormalizationOutcome& outcome);

}  // namespace ppmkit
