#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "ppmkit/blocks.hpp"
#include "ppmkit/eventlog.hpp"
#include "ppmkit/json.hpp"
#include "ppmkit/rational.hpp"

namespace ppmkit {

class MetricError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SessionMetrics {
  std::size_t max_simul_block = 0;
  MaybeRational perc_num_block_as_a_whole;
  MaybeRational avg_move_on_moved_elements;
  Rational perc_num_elements_with_moves;
  Duration tot_time{};
  Duration tot_create_time{};

  friend bool operator==(const SessionMetrics&, const SessionMetrics&) = default;
};

/// Names in reporting order.
inline constexpr const char* kMetricNames[] = {
    "MaxSimulBlock",           "PercNumBlockAsAWhole", "AvgMoveOnMovedElements",
    "PercNumElementsWithMoves", "TotTime",              "TotCreateTime",
};

// The per-log metrics below expect reconnects to be expanded already.

/// Move events per moved object; nullopt when nothing was moved.
MaybeRational avg_move_on_moved_elements(const EventLog& log);

/// Moved objects over all objects ever created. Throws MetricError
/// ("empty session") when nothing was created.
Rational perc_num_elements_with_moves(const EventLog& log);

/// Throws MetricError on an empty log.
Duration tot_time(const EventLog& log);

/// Throws MetricError when the log has no create events.
Duration tot_create_time(const EventLog& log);

struct SessionAnalysis {
  SessionMetrics metrics;
  std::vector<Block> blocks;
};

/// Expands reconnects, replays the log and evaluates all six metrics.
SessionAnalysis analyze_session(const EventLog& log);
SessionMetrics compute_session_metrics(const EventLog& log);

/// Metric value by reporting name as a real number; nullopt when not
/// applicable. Durations are in seconds.
std::optional<double> metric_value(const SessionMetrics& m, std::string_view name);

Json metrics_to_json(const SessionMetrics& m);

}  // namespace ppmkit
