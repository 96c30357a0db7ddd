#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ppmkit/blocks.hpp"
#include "ppmkit/eventlog.hpp"
#include "ppmkit/json.hpp"
#include "ppmkit/metrics.hpp"
#include "ppmkit/model.hpp"
#include "ppmkit/normalize.hpp"
#include "ppmkit/soundness.hpp"
#include "ppmkit/wfnet.hpp"

namespace ppmkit {

enum class Stage { MixedGateway, NotWFStructured, Unsound, StateSpaceExceeded, Sound };

std::string_view to_string(Stage stage);
std::optional<Stage> stage_from_string(std::string_view name);

struct PerspicuityVerdict {
  bool perspicuous = false;
  Stage stage = Stage::Unsound;
  NormalizationOutcome normalization;
  /// Present when translation succeeded.
  std::optional<WFNet> net;
  std::optional<SoundnessReport> soundness;
  /// Set when the normalized model could not be translated.
  std::optional<std::string> translation_error;
};

/// Mixed gateway -> MixedGateway; failed normalization, translation or WF
/// structure -> NotWFStructured; otherwise the soundness verdict decides.
/// Throws std::invalid_argument on an empty model.
PerspicuityVerdict classify_model(const ProcessModel& model, std::size_t max_states = kDefaultMaxStates);

struct SessionReport {
  std::string session_id;
  SessionMetrics metrics;
  std::vector<Block> blocks;
  PerspicuityVerdict verdict;
};

SessionReport classify_session(const EventLog& log, std::size_t max_states = kDefaultMaxStates);

Json verdict_to_json(const PerspicuityVerdict& verdict);
Json report_to_json(const SessionReport& report);

/// The subset of a stored SessionReport needed for group statistics.
struct StoredReport {
  std::string session_id;
  bool perspicuous = false;
  Stage stage = Stage::Unsound;
  /// Metric values keyed by reporting name; nullopt = not applicable.
  std::vector<std::pair<std::string, std::optional<double>>> metrics;
};

/// Reads back a report_to_json() document. Throws std::invalid_argument.
StoredReport stored_report_from_json(const Json& j);

}  // namespace ppmkit
