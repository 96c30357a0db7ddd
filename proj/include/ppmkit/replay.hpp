#pragma once

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>

#include "ppmkit/eventlog.hpp"
#include "ppmkit/model.hpp"

namespace ppmkit {

class ReplayError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Folds events one at a time into a ProcessModel.
///
/// Deleting a node also removes its incident edges; an explicit DELETE_EDGE
/// for such an edge that arrives later is accepted as a no-op. RECONNECT_EDGE
/// is applied as delete + create, matching expand_reconnect().
class Replayer {
 public:
  void apply(const ModelingEvent& event);

  const ProcessModel& model() const { return model_; }
  /// Number of events applied so far.
  std::size_t applied() const { return applied_; }

  /// True when the event can change the graph topology (node/edge sets).
  static bool is_structural(const ModelingEvent& event);

 private:
  ProcessModel model_;
  std::set<std::string> cascaded_;
  std::size_t applied_ = 0;
};

/// Model after all events with seq <= cutoff.
ProcessModel replay_until(const EventLog& log, std::uint64_t cutoff_seq);
/// Model after all events with timestamp <= cutoff.
ProcessModel replay_until(const EventLog& log, Timestamp cutoff);
ProcessModel final_model(const EventLog& log);

}  // namespace ppmkit
