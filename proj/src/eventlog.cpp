#include "ppmkit/eventlog.hpp"

#include <array>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include <fmt/format.h>

namespace ppmkit {

namespace {

struct KindInfo {
  EventKind kind;
  std::string_view name;
  ObjectType type;
  EventClass cls;
};

// Table of every recorded editor action. Bendpoint operations count as edge
// moves; reconnect is expanded into delete + create.
constexpr std::array<KindInfo, 26> kKinds = {{
    {EventKind::CreateStartEvent, "CREATE_START_EVENT", ObjectType::StartEvent, EventClass::Create},
    {EventKind::CreateEndEvent, "CREATE_END_EVENT", ObjectType::EndEvent, EventClass::Create},
    {EventKind::CreateActivity, "CREATE_ACTIVITY", ObjectType::Activity, EventClass::Create},
    {EventKind::CreateXor, "CREATE_XOR", ObjectType::Xor, EventClass::Create},
    {EventKind::CreateAnd, "CREATE_AND", ObjectType::And, EventClass::Create},
    {EventKind::CreateEdge, "CREATE_EDGE", ObjectType::Edge, EventClass::Create},
    {EventKind::MoveStartEvent, "MOVE_START_EVENT", ObjectType::StartEvent, EventClass::Move},
    {EventKind::MoveEndEvent, "MOVE_END_EVENT", ObjectType::EndEvent, EventClass::Move},
    {EventKind::MoveActivity, "MOVE_ACTIVITY", ObjectType::Activity, EventClass::Move},
    {EventKind::MoveXor, "MOVE_XOR", ObjectType::Xor, EventClass::Move},
    {EventKind::MoveAnd, "MOVE_AND", ObjectType::And, EventClass::Move},
    {EventKind::MoveEdgeLabel, "MOVE_EDGE_LABEL", ObjectType::Edge, EventClass::Move},
    {EventKind::DeleteStartEvent, "DELETE_START_EVENT", ObjectType::StartEvent, EventClass::Delete},
    {EventKind::DeleteEndEvent, "DELETE_END_EVENT", ObjectType::EndEvent, EventClass::Delete},
    {EventKind::DeleteActivity, "DELETE_ACTIVITY", ObjectType::Activity, EventClass::Delete},
    {EventKind::DeleteXor, "DELETE_XOR", ObjectType::Xor, EventClass::Delete},
    {EventKind::DeleteAnd, "DELETE_AND", ObjectType::And, EventClass::Delete},
    {EventKind::DeleteEdge, "DELETE_EDGE", ObjectType::Edge, EventClass::Delete},
    {EventKind::ReconnectEdge, "RECONNECT_EDGE", ObjectType::Edge, EventClass::Reconnect},
    {EventKind::CreateEdgeBendpoint, "CREATE_EDGE_BENDPOINT", ObjectType::Edge, EventClass::Move},
    {EventKind::MoveEdgeBendpoint, "MOVE_EDGE_BENDPOINT", ObjectType::Edge, EventClass::Move},
    {EventKind::DeleteEdgeBendpoint, "DELETE_EDGE_BENDPOINT", ObjectType::Edge, EventClass::Move},
    {EventKind::NameActivity, "NAME_ACTIVITY", ObjectType::Activity, EventClass::Other},
    {EventKind::RenameActivity, "RENAME_ACTIVITY", ObjectType::Activity, EventClass::Other},
    {EventKind::NameEdge, "NAME_EDGE", ObjectType::Edge, EventClass::Other},
    {EventKind::RenameEdge, "RENAME_EDGE", ObjectType::Edge, EventClass::Other},
}};

const KindInfo& info(EventKind kind) {
  for (const auto& k : kKinds) {
    if (k.kind == kind) return k;
  }
  throw std::logic_error("unhandled event kind");
}

constexpr std::array<std::pair<ObjectType, std::string_view>, 6> kTypes = {{
    {ObjectType::StartEvent, "START_EVENT"},
    {ObjectType::EndEvent, "END_EVENT"},
    {ObjectType::Activity, "ACTIVITY"},
    {ObjectType::Xor, "XOR"},
    {ObjectType::And, "AND"},
    {ObjectType::Edge, "EDGE"},
}};

template <typename T>
bool parse_integer(std::string_view text, T& out) {
  if (text.empty()) return false;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc{} && ptr == text.data() + text.size();
}

struct Record {
  std::size_t line;
  std::vector<std::string> fields;
};

// RFC-4180 record splitter. Quoted fields may contain commas, doubled quotes
// and line breaks.
std::vector<Record> split_records(std::string_view text) {
  std::vector<Record> records;
  std::size_t line = 1;
  std::size_t pos = 0;
  while (pos < text.size()) {
    Record rec{line, {}};
    std::string field;
    bool in_quotes = false;
    bool was_quoted = false;
    for (;;) {
      if (pos >= text.size()) {
        if (in_quotes) throw LogError(fmt::format("unterminated quoted field at line {}", rec.line), rec.line);
        rec.fields.push_back(std::move(field));
        break;
      }
      char c = text[pos++];
      if (in_quotes) {
        if (c == '"') {
          if (pos < text.size() && text[pos] == '"') {
            field.push_back('"');
            ++pos;
          } else {
            in_quotes = false;
          }
        } else {
          if (c == '\n') ++line;
          field.push_back(c);
        }
        continue;
      }
      if (c == '"') {
        if (!field.empty() || was_quoted) {
          throw LogError(fmt::format("stray quote at line {}", line), line);
        }
        in_quotes = true;
        was_quoted = true;
      } else if (c == ',') {
        rec.fields.push_back(std::move(field));
        field.clear();
        was_quoted = false;
      } else if (c == '\n') {
        ++line;
        rec.fields.push_back(std::move(field));
        break;
      } else if (c == '\r' && pos < text.size() && text[pos] == '\n') {
        // tolerate CRLF
      } else {
        if (was_quoted) throw LogError(fmt::format("text after closing quote at line {}", line), line);
        field.push_back(c);
      }
    }
    if (rec.fields.size() == 1 && rec.fields[0].empty()) continue;  // blank line
    records.push_back(std::move(rec));
  }
  return records;
}

std::optional<std::string> optional_field(std::string s) {
  if (s.empty()) return std::nullopt;
  return s;
}

ModelingEvent parse_row(const Record& rec) {
  const auto line = rec.line;
  auto fail = [line](const std::string& what) -> LogError {
    return LogError(fmt::format("malformed row at line {}: {}", line, what), line);
  };
  if (rec.fields.size() != 10) {
    throw fail(fmt::format("expected 10 fields, got {}", rec.fields.size()));
  }
  const auto& f = rec.fields;
  ModelingEvent ev;
  if (!parse_integer(f[0], ev.seq) || ev.seq == 0) throw fail("seq must be a positive integer");
  try {
    ev.timestamp = parse_timestamp(f[1]);
  } catch (const std::invalid_argument& e) {
    throw fail(e.what());
  }
  auto kind = event_kind_from_string(f[2]);
  if (!kind) throw LogError(fmt::format("unknown event name {} at line {}", f[2], line), line);
  ev.kind = *kind;
  if (f[3].empty()) throw fail("empty object_id");
  ev.object_id = f[3];
  auto type = object_type_from_string(f[4]);
  if (!type) throw fail(fmt::format("unknown object type {}", f[4]));
  ev.object_type = *type;
  if (f[5].empty() != f[6].empty()) throw fail("x and y must both be present or both be empty");
  if (!f[5].empty()) {
    Point p;
    if (!parse_integer(f[5], p.x) || !parse_integer(f[6], p.y)) throw fail("coordinates must be integers");
    ev.position = p;
  }
  ev.label = optional_field(f[7]);
  ev.source_id = optional_field(f[8]);
  ev.target_id = optional_field(f[9]);
  return ev;
}

std::string quote_csv(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

enum class Life { Alive, Deleted, Cascaded };

struct ObjectState {
  ObjectType type;
  Life life = Life::Alive;
  std::string source;
  std::string target;
};

}  // namespace

Timestamp parse_timestamp(std::string_view text) {
  // YYYY-MM-DDThh:mm:ss.sssZ
  auto bad = [&]() {
    return std::invalid_argument(fmt::format("invalid timestamp '{}'", text));
  };
  if (text.size() != 24 || text[4] != '-' || text[7] != '-' || text[10] != 'T' || text[13] != ':' ||
      text[16] != ':' || text[19] != '.' || text[23] != 'Z') {
    throw bad();
  }
  int y = 0;
  unsigned mo = 0, d = 0, h = 0, mi = 0, s = 0, ms = 0;
  if (!parse_integer(text.substr(0, 4), y) || !parse_integer(text.substr(5, 2), mo) ||
      !parse_integer(text.substr(8, 2), d) || !parse_integer(text.substr(11, 2), h) ||
      !parse_integer(text.substr(14, 2), mi) || !parse_integer(text.substr(17, 2), s) ||
      !parse_integer(text.substr(20, 3), ms)) {
    throw bad();
  }
  using namespace std::chrono;
  year_month_day ymd{year{y}, month{mo}, day{d}};
  if (!ymd.ok() || h > 23 || mi > 59 || s > 59) throw bad();
  return sys_days{ymd} + hours{h} + minutes{mi} + seconds{s} + milliseconds{ms};
}

std::string format_timestamp(Timestamp t) {
  using namespace std::chrono;
  auto day_point = floor<days>(t);
  year_month_day ymd{day_point};
  auto rest = t - day_point;
  auto h = duration_cast<hours>(rest);
  rest -= h;
  auto mi = duration_cast<minutes>(rest);
  rest -= mi;
  auto s = duration_cast<seconds>(rest);
  rest -= s;
  return fmt::format("{:04}-{:02}-{:02}T{:02}:{:02}:{:02}.{:03}Z", static_cast<int>(ymd.year()),
                     static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()), h.count(),
                     mi.count(), s.count(), rest.count());
}

std::string_view to_string(EventKind kind) { return info(kind).name; }

std::optional<EventKind> event_kind_from_string(std::string_view name) {
  for (const auto& k : kKinds) {
    if (k.name == name) return k.kind;
  }
  // Spelling used in some Cheetah exports.
  if (name == "DELETE_EDGE_BENDBPOINT") return EventKind::DeleteEdgeBendpoint;
  return std::nullopt;
}

std::string_view to_string(ObjectType type) {
  for (const auto& [t, name] : kTypes) {
    if (t == type) return name;
  }
  throw std::logic_error("unhandled object type");
}

std::optional<ObjectType> object_type_from_string(std::string_view name) {
  for (const auto& [t, n] : kTypes) {
    if (n == name) return t;
  }
  return std::nullopt;
}

ObjectType object_type_of(EventKind kind) { return info(kind).type; }

EventClass classify(EventKind kind) { return info(kind).cls; }

std::string_view to_string(EventClass cls) {
  switch (cls) {
    case EventClass::Create: return "Create";
    case EventClass::Move: return "Move";
    case EventClass::Delete: return "Delete";
    case EventClass::Other: return "Other";
    case EventClass::Reconnect: return "Reconnect";
  }
  return "?";
}

void validate_log(const EventLog& log) {
  std::unordered_map<std::string, ObjectState> objects;
  const ModelingEvent* prev = nullptr;
  for (std::size_t i = 0; i < log.events.size(); ++i) {
    const auto& ev = log.events[i];
    const std::size_t line = i + 2;
    auto fail = [line](const std::string& what) { return LogError(fmt::format("{} at line {}", what, line), line); };

    if (prev) {
      if (ev.seq <= prev->seq) throw fail(fmt::format("seq {} not strictly increasing", ev.seq));
      if (ev.timestamp < prev->timestamp) throw fail(fmt::format("timestamp regression at seq {}", ev.seq));
    }
    prev = &ev;

    const ObjectType expected = object_type_of(ev.kind);
    if (ev.object_type != expected) {
      throw fail(fmt::format("object type {} inconsistent with event {}", to_string(ev.object_type),
                             to_string(ev.kind)));
    }

    auto require_alive_node = [&](const std::optional<std::string>& id, std::string_view role) {
      if (!id) throw fail(fmt::format("edge {} missing {}", ev.object_id, role));
      auto it = objects.find(*id);
      if (it == objects.end() || it->second.life != Life::Alive || !is_node_type(it->second.type)) {
        throw fail(fmt::format("edge {} {} {} is not an existing node", ev.object_id, role, *id));
      }
    };

    const EventClass cls = classify(ev.kind);
    auto it = objects.find(ev.object_id);
    if (cls == EventClass::Create) {
      if (it != objects.end()) {
        throw fail(it->second.life == Life::Alive
                       ? fmt::format("duplicate create of object {}", ev.object_id)
                       : fmt::format("re-creation of deleted object {}", ev.object_id));
      }
      ObjectState st;
      st.type = expected;
      if (expected == ObjectType::Edge) {
        require_alive_node(ev.source_id, "source_id");
        require_alive_node(ev.target_id, "target_id");
        st.source = *ev.source_id;
        st.target = *ev.target_id;
      }
      objects.emplace(ev.object_id, std::move(st));
      continue;
    }

    if (it == objects.end()) throw fail(fmt::format("action on unknown object {}", ev.object_id));
    ObjectState& st = it->second;
    if (st.type != expected) {
      throw fail(fmt::format("event {} on object {} of type {}", to_string(ev.kind), ev.object_id,
                             to_string(st.type)));
    }
    if (st.life == Life::Cascaded && ev.kind == EventKind::DeleteEdge) {
      // Edge already removed with its endpoint; the explicit delete is redundant.
      st.life = Life::Deleted;
      continue;
    }
    if (st.life != Life::Alive) throw fail(fmt::format("action on deleted object {}", ev.object_id));

    if (cls == EventClass::Delete) {
      st.life = Life::Deleted;
      if (is_node_type(st.type)) {
        for (auto& [id, other] : objects) {
          if (other.type == ObjectType::Edge && other.life == Life::Alive &&
              (other.source == ev.object_id || other.target == ev.object_id)) {
            other.life = Life::Cascaded;
          }
        }
      }
    } else if (cls == EventClass::Reconnect) {
      require_alive_node(ev.source_id, "source_id");
      require_alive_node(ev.target_id, "target_id");
      st.source = *ev.source_id;
      st.target = *ev.target_id;
    }
  }
}

EventLog parse_log(std::string_view text, std::string session_id) {
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  auto records = split_records(text);
  if (records.empty()) throw LogError("missing header row", 1);
  {
    std::string header;
    for (std::size_t i = 0; i < records[0].fields.size(); ++i) {
      if (i) header.push_back(',');
      header += records[0].fields[i];
    }
    if (header != kLogHeader) throw LogError(fmt::format("unexpected header '{}'", header), records[0].line);
  }
  EventLog log;
  log.session_id = std::move(session_id);
  log.events.reserve(records.size() - 1);
  std::vector<std::size_t> lines;
  for (std::size_t i = 1; i < records.size(); ++i) {
    log.events.push_back(parse_row(records[i]));
    lines.push_back(records[i].line);
  }
  try {
    validate_log(log);
  } catch (const LogError& e) {
    // Map event index back to the physical CSV line (quoted labels may span lines).
    const std::size_t idx = e.line() - 2;
    if (idx < lines.size() && lines[idx] != e.line()) {
      std::string msg = e.what();
      const std::string suffix = fmt::format(" at line {}", e.line());
      if (msg.size() >= suffix.size() && msg.compare(msg.size() - suffix.size(), suffix.size(), suffix) == 0) {
        msg.resize(msg.size() - suffix.size());
      }
      throw LogError(fmt::format("{} at line {}", msg, lines[idx]), lines[idx]);
    }
    throw;
  }
  return log;
}

EventLog read_log_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LogError(fmt::format("cannot open {}", path), 0);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_log(buf.str(), std::filesystem::path(path).stem().string());
}

std::string serialize_log(const EventLog& log) {
  std::string out(kLogHeader);
  out.push_back('\n');
  for (const auto& ev : log.events) {
    out += fmt::format("{},{},{},{},{},", ev.seq, format_timestamp(ev.timestamp), to_string(ev.kind),
                       quote_csv(ev.object_id), to_string(ev.object_type));
    if (ev.position) out += fmt::format("{},{}", ev.position->x, ev.position->y);
    else out += ",";
    out += fmt::format(",{},{},{}\n", quote_csv(ev.label.value_or("")), quote_csv(ev.source_id.value_or("")),
                       quote_csv(ev.target_id.value_or("")));
  }
  return out;
}

EventLog expand_reconnect(const EventLog& log) {
  EventLog out;
  out.session_id = log.session_id;
  out.events.reserve(log.events.size());
  std::uint64_t shift = 0;
  for (const auto& ev : log.events) {
    if (ev.kind != EventKind::ReconnectEdge) {
      auto copy = ev;
      copy.seq += shift;
      out.events.push_back(std::move(copy));
      continue;
    }
    ModelingEvent del;
    del.seq = ev.seq + shift;
    del.timestamp = ev.timestamp;
    del.kind = EventKind::DeleteEdge;
    del.object_id = ev.object_id;
    del.object_type = ObjectType::Edge;

    ModelingEvent create = ev;
    create.seq = del.seq + 1;
    create.kind = EventKind::CreateEdge;

    out.events.push_back(std::move(del));
    out.events.push_back(std::move(create));
    ++shift;
  }
  return out;
}

}  // namespace ppmkit
