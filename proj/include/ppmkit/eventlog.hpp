#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ppmkit {

using Duration = std::chrono::milliseconds;
using Timestamp = std::chrono::sys_time<Duration>;

/// Parses `YYYY-MM-DDThh:mm:ss.sssZ`. Throws std::invalid_argument.
Timestamp parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp t);

/// Seconds with millisecond resolution, for reporting.
inline double to_seconds(Duration d) { return static_cast<double>(d.count()) / 1000.0; }

enum class EventKind {
  CreateStartEvent,
  CreateEndEvent,
  CreateActivity,
  CreateXor,
  CreateAnd,
  CreateEdge,
  MoveStartEvent,
  MoveEndEvent,
  MoveActivity,
  MoveXor,
  MoveAnd,
  MoveEdgeLabel,
  DeleteStartEvent,
  DeleteEndEvent,
  DeleteActivity,
  DeleteXor,
  DeleteAnd,
  DeleteEdge,
  ReconnectEdge,
  CreateEdgeBendpoint,
  MoveEdgeBendpoint,
  DeleteEdgeBendpoint,
  NameActivity,
  RenameActivity,
  NameEdge,
  RenameEdge,
};

inline constexpr EventKind kAllEventKinds[] = {
    EventKind::CreateStartEvent,    EventKind::CreateEndEvent,    EventKind::CreateActivity,
    EventKind::CreateXor,           EventKind::CreateAnd,         EventKind::CreateEdge,
    EventKind::MoveStartEvent,      EventKind::MoveEndEvent,      EventKind::MoveActivity,
    EventKind::MoveXor,             EventKind::MoveAnd,           EventKind::MoveEdgeLabel,
    EventKind::DeleteStartEvent,    EventKind::DeleteEndEvent,    EventKind::DeleteActivity,
    EventKind::DeleteXor,           EventKind::DeleteAnd,         EventKind::DeleteEdge,
    EventKind::ReconnectEdge,       EventKind::CreateEdgeBendpoint, EventKind::MoveEdgeBendpoint,
    EventKind::DeleteEdgeBendpoint, EventKind::NameActivity,      EventKind::RenameActivity,
    EventKind::NameEdge,            EventKind::RenameEdge,
};

std::string_view to_string(EventKind kind);
std::optional<EventKind> event_kind_from_string(std::string_view name);

enum class ObjectType { StartEvent, EndEvent, Activity, Xor, And, Edge };

std::string_view to_string(ObjectType type);
std::optional<ObjectType> object_type_from_string(std::string_view name);

/// The object type an event kind acts on.
ObjectType object_type_of(EventKind kind);

inline bool is_node_type(ObjectType type) { return type != ObjectType::Edge; }
inline bool is_gateway_type(ObjectType type) {
  return type == ObjectType::Xor || type == ObjectType::And;
}

/// Reconnect is its own class: it stands for a delete followed by a create
/// and is split into those two by expand_reconnect().
enum class EventClass { Create, Move, Delete, Other, Reconnect };

EventClass classify(EventKind kind);
std::string_view to_string(EventClass cls);

struct Point {
  std::int64_t x = 0;
  std::int64_t y = 0;
  friend bool operator==(const Point&, const Point&) = default;
};

struct ModelingEvent {
  std::uint64_t seq = 0;
  Timestamp timestamp{};
  EventKind kind = EventKind::CreateActivity;
  std::string object_id;
  ObjectType object_type = ObjectType::Activity;
  std::optional<Point> position;
  std::optional<std::string> label;
  std::optional<std::string> source_id;
  std::optional<std::string> target_id;

  EventClass event_class() const { return classify(kind); }
  friend bool operator==(const ModelingEvent&, const ModelingEvent&) = default;
};

struct EventLog {
  std::string session_id;
  std::vector<ModelingEvent> events;

  bool empty() const { return events.empty(); }
  friend bool operator==(const EventLog&, const EventLog&) = default;
};

/// Validation or parse failure. `line` is the 1-based CSV line (header is
/// line 1), or 0 when the error is not tied to a line.
class LogError : public std::runtime_error {
 public:
  LogError(const std::string& message, std::size_t line)
      : std::runtime_error(message), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

inline constexpr std::string_view kLogHeader =
    "seq,timestamp,event,object_id,object_type,x,y,label,source_id,target_id";

/// Parses the CSV log format and validates it (see validate_log).
EventLog parse_log(std::string_view text, std::string session_id = {});
EventLog read_log_file(const std::string& path);

std::string serialize_log(const EventLog& log);

/// Checks ordering, kind/type consistency and object lifecycles of a
/// user-recorded log. Throws LogError. Event i is reported as line i + 2.
void validate_log(const EventLog& log);

/// Replaces every RECONNECT_EDGE by DELETE_EDGE + CREATE_EDGE on the same
/// edge id and timestamp; later seq values shift up by one per reconnect.
EventLog expand_reconnect(const EventLog& log);

}  // namespace ppmkit
