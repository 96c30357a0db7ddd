#include <doctest.h>

#include "ppmkit/eventlog.hpp"
#include "test_util.hpp"

using namespace ppmkit;
using testutil::csv;
using testutil::log_of;

TEST_CASE("timestamps round-trip with millisecond precision") {
  const auto t = parse_timestamp("2010-11-15T10:00:01.250Z");
  CHECK(format_timestamp(t) == "2010-11-15T10:00:01.250Z");
  CHECK(format_timestamp(t + Duration(750)) == "2010-11-15T10:00:02.000Z");
  CHECK_THROWS_AS(parse_timestamp("2010-11-15 10:00:01"), std::invalid_argument);
  CHECK_THROWS_AS(parse_timestamp("2010-13-15T10:00:01.000Z"), std::invalid_argument);
}

TEST_CASE("every event kind has a name and an object type") {
  for (auto kind : kAllEventKinds) {
    const auto name = to_string(kind);
    REQUIRE(event_kind_from_string(name) == kind);
    CHECK(classify(kind) == classify(*event_kind_from_string(name)));
  }
  CHECK(event_kind_from_string("DELETE_EDGE_BENDBPOINT") == EventKind::DeleteEdgeBendpoint);
  CHECK_FALSE(event_kind_from_string("CREATE_TEXT_ANNOTATION"));
}

TEST_CASE("event classes") {
  CHECK(classify(EventKind::CreateXor) == EventClass::Create);
  CHECK(classify(EventKind::CreateEdgeBendpoint) == EventClass::Move);
  CHECK(classify(EventKind::DeleteEdgeBendpoint) == EventClass::Move);
  CHECK(classify(EventKind::DeleteActivity) == EventClass::Delete);
  CHECK(classify(EventKind::RenameActivity) == EventClass::Other);
  CHECK(classify(EventKind::ReconnectEdge) == EventClass::Reconnect);
}

TEST_CASE("parse the hand fixtures") {
  const auto log = read_log_file(testutil::fixture("diamond_moves.csv"));
  CHECK(log.session_id == "diamond_moves");
  REQUIRE(log.events.size() == 18);
  CHECK(log.events[5].kind == EventKind::CreateEdge);
  CHECK(log.events[5].source_id == "S");
  CHECK(log.events[5].target_id == "g1");
  CHECK(log.events.back().label == "Check fuel");
  CHECK(log.events[2].position == Point{200, 50});
}

TEST_CASE("serialize and parse round-trip, including quoted labels") {
  const auto log = read_log_file(testutil::fixture("preflight_17min.csv"));
  const auto again = parse_log(serialize_log(log), log.session_id);
  REQUIRE(again.events.size() == log.events.size());
  for (std::size_t k = 0; k < log.events.size(); ++k) {
    CHECK(again.events[k].label == log.events[k].label);
    CHECK(again.events[k].timestamp == log.events[k].timestamp);
  }
  CHECK(log.events[2].label == "Check aircraft, fuel");
  CHECK(log.events[8].label == "Board \"pax\"");
}

TEST_CASE("a quoted label may span lines; later errors report physical lines") {
  std::string text(kLogHeader);
  text += "\n1,2010-11-15T10:00:00.000Z,CREATE_ACTIVITY,A,ACTIVITY,0,0,\"two\nlines\",,\n";
  text += "2,2010-11-15T10:00:01.000Z,MOVE_ACTIVITY,Q,ACTIVITY,1,1,,,\n";
  try {
    parse_log(text);
    FAIL("expected an error");
  } catch (const LogError& e) {
    CHECK(e.line() == 4);
    CHECK(std::string(e.what()) == "action on unknown object Q at line 4");
  }
}

TEST_CASE("malformed rows") {
  CHECK_THROWS_WITH_AS(parse_log(csv({"0,CREATE_ACTIVITY,A,ACTIVITY,0,0,,"})),
                       "malformed row at line 2: expected 10 fields, got 9", LogError);
  CHECK_THROWS_WITH_AS(parse_log(csv({"0,CREATE_POOL,A,ACTIVITY,0,0,,,"})), "unknown event name CREATE_POOL at line 2",
                       LogError);
  CHECK_THROWS_AS(parse_log(csv({"0,CREATE_ACTIVITY,A,XOR,0,0,,,"})), LogError);
  CHECK_THROWS_AS(parse_log(csv({"0,CREATE_ACTIVITY,A,ACTIVITY,0,,,,"})), LogError);
  CHECK_THROWS_AS(parse_log("seq,time\n"), LogError);
}

TEST_CASE("ordering rules") {
  std::string text(kLogHeader);
  text += "\n2,2010-11-15T10:00:00.000Z,CREATE_ACTIVITY,A,ACTIVITY,0,0,,,\n";
  text += "2,2010-11-15T10:00:01.000Z,CREATE_ACTIVITY,B,ACTIVITY,0,0,,,\n";
  CHECK_THROWS_AS(parse_log(text), LogError);
  CHECK_THROWS_AS(log_of({"5,CREATE_ACTIVITY,A,ACTIVITY,0,0,,,", "4,CREATE_ACTIVITY,B,ACTIVITY,0,0,,,"}), LogError);
  CHECK_NOTHROW(log_of({"5,CREATE_ACTIVITY,A,ACTIVITY,0,0,,,", "5,CREATE_ACTIVITY,B,ACTIVITY,0,0,,,"}));
}

TEST_CASE("object lifecycle") {
  SUBCASE("duplicate create") {
    CHECK_THROWS_AS(log_of({"0,CREATE_ACTIVITY,A,ACTIVITY,0,0,,,", "1,CREATE_ACTIVITY,A,ACTIVITY,0,0,,,"}), LogError);
  }
  SUBCASE("re-creation after delete") {
    CHECK_THROWS_AS(log_of({"0,CREATE_ACTIVITY,A,ACTIVITY,0,0,,,", "1,DELETE_ACTIVITY,A,ACTIVITY,,,,,",
                            "2,CREATE_ACTIVITY,A,ACTIVITY,0,0,,,"}),
                    LogError);
  }
  SUBCASE("edge to a missing node") {
    CHECK_THROWS_AS(log_of({"0,CREATE_ACTIVITY,A,ACTIVITY,0,0,,,", "1,CREATE_EDGE,e,EDGE,,,,A,B"}), LogError);
  }
  SUBCASE("move after delete") {
    CHECK_THROWS_AS(log_of({"0,CREATE_ACTIVITY,A,ACTIVITY,0,0,,,", "1,DELETE_ACTIVITY,A,ACTIVITY,,,,,",
                            "2,MOVE_ACTIVITY,A,ACTIVITY,1,1,,,"}),
                    LogError);
  }
  SUBCASE("deleting an edge already removed with its node is tolerated") {
    CHECK_NOTHROW(log_of({"0,CREATE_ACTIVITY,A,ACTIVITY,0,0,,,", "1,CREATE_ACTIVITY,B,ACTIVITY,0,0,,,",
                          "2,CREATE_EDGE,e,EDGE,,,,A,B", "3,DELETE_ACTIVITY,B,ACTIVITY,,,,,",
                          "4,DELETE_EDGE,e,EDGE,,,,,"}));
  }
  SUBCASE("reconnect needs live endpoints") {
    CHECK_THROWS_AS(log_of({"0,CREATE_ACTIVITY,A,ACTIVITY,0,0,,,", "1,CREATE_ACTIVITY,B,ACTIVITY,0,0,,,",
                            "2,CREATE_EDGE,e,EDGE,,,,A,B", "3,RECONNECT_EDGE,e,EDGE,,,,A,Z"}),
                    LogError);
  }
}

TEST_CASE("expand_reconnect turns a reconnect into delete then create") {
  const auto log = read_log_file(testutil::fixture("reconnect_end.csv"));
  const auto ex = expand_reconnect(log);
  REQUIRE(ex.events.size() == log.events.size() + 1);
  const auto& del = ex.events[ex.events.size() - 2];
  const auto& cre = ex.events.back();
  CHECK(del.kind == EventKind::DeleteEdge);
  CHECK(cre.kind == EventKind::CreateEdge);
  CHECK(cre.source_id == "B");
  CHECK(cre.target_id == "E");
  CHECK(del.timestamp == cre.timestamp);
  CHECK(cre.seq == del.seq + 1);
}
