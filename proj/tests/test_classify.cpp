#include <doctest.h>

#include "oracles.hpp"
#include "ppmkit/classify.hpp"
#include "test_util.hpp"

using namespace ppmkit;
using oracle::build_model;

TEST_CASE("hand fixtures are perspicuous") {
  for (const auto* name : {"diamond_moves.csv", "nested_stray.csv", "reconnect_end.csv", "preflight_17min.csv"}) {
    CAPTURE(name);
    const auto report = classify_session(read_log_file(testutil::fixture(name)));
    CHECK(report.verdict.perspicuous);
    CHECK(report.verdict.stage == Stage::Sound);
  }
}

TEST_CASE("each stage of the pipeline") {
  SUBCASE("mixed gateway") {
    const auto v = classify_model(
        build_model({"S:start", "a:task", "b:task", "g:xor", "c:task", "d:task", "E:end"},
                    {"S>a", "S>b", "a>g", "b>g", "g>c", "g>d", "c>E", "d>E"}));
    CHECK(v.stage == Stage::MixedGateway);
    CHECK_FALSE(v.perspicuous);
    CHECK_FALSE(v.net);
  }
  SUBCASE("no start event") {
    const auto v = classify_model(build_model({"a:task", "b:task"}, {"a>b", "b>a"}));
    CHECK(v.stage == Stage::NotWFStructured);
  }
  SUBCASE("unsound after normalization") {
    // XOR-split closed by an AND-join.
    const auto v = classify_model(build_model({"S:start", "x:xor", "a:task", "b:task", "j:and", "E:end"},
                                              {"S>x", "x>a", "x>b", "a>j", "b>j", "j>E"}));
    CHECK(v.stage == Stage::Unsound);
    REQUIRE(v.soundness);
    CHECK(v.soundness->verdict == Verdict::Unsound);
  }
  SUBCASE("state cap") {
    const auto v = classify_model(build_model({"S:start", "x:and", "a:task", "b:task", "j:and", "E:end"},
                                              {"S>x", "x>a", "x>b", "a>j", "b>j", "j>E"}),
                                  3);
    CHECK(v.stage == Stage::StateSpaceExceeded);
    CHECK_FALSE(v.perspicuous);
  }
  SUBCASE("two unconnected tasks become an exclusive choice") {
    const auto v = classify_model(build_model({"a:task", "b:task"}, {}));
    CHECK(v.perspicuous);
  }
}

TEST_CASE("classify_model rejects an empty model") {
  CHECK_THROWS_AS(classify_model(ProcessModel{}), std::invalid_argument);
}

TEST_CASE("session report JSON round-trips into a stored report") {
  const auto report = classify_session(read_log_file(testutil::fixture("reconnect_end.csv")));
  const auto j = report_to_json(report);
  CHECK(j["session_id"] == "reconnect_end");
  CHECK(j["verdict"]["stage"] == "Sound");
  const auto stored = stored_report_from_json(j);
  CHECK(stored.perspicuous);
  CHECK(stored.stage == Stage::Sound);
  REQUIRE(stored.metrics.size() == 6);
  bool saw_na = false;
  for (const auto& [name, value] : stored.metrics) {
    if (name == "PercNumBlockAsAWhole") saw_na = !value.has_value();
    if (name == "TotTime") CHECK(*value == doctest::Approx(900));
  }
  CHECK(saw_na);
}

TEST_CASE("stage names") {
  for (auto s : {Stage::MixedGateway, Stage::NotWFStructured, Stage::Unsound, Stage::StateSpaceExceeded, Stage::Sound}) {
    CHECK(stage_from_string(to_string(s)) == s);
  }
  CHECK_FALSE(stage_from_string("Perfect"));
}
