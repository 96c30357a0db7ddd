#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "ppmkit/cli.hpp"
#include "ppmkit/json.hpp"
#include "test_util.hpp"

using namespace ppmkit;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_command(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("ppmkit-cli-" + std::to_string(::getpid()) + "-" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("parse summarizes a log") {
  const auto r = run({"parse", "--log", testutil::fixture("diamond_moves.csv")});
  REQUIRE(r.code == kExitOk);
  const auto j = Json::parse(r.out);
  CHECK(j["event_count"] == 18);
  CHECK(j["object_count"] == 14);
  CHECK(j["class_counts"]["Move"] == 3);
}

TEST_CASE("validation errors exit with 1 and a diagnostic") {
  const auto dir = scratch("bad");
  fs::create_directories(dir);
  {
    std::ofstream f(dir / "bad.csv");
    f << kLogHeader << "\n1,2010-11-15T10:00:00.000Z,MOVE_ACTIVITY,A,ACTIVITY,1,1,,,\n";
  }
  const auto r = run({"metrics", "--log", (dir / "bad.csv").string()});
  CHECK(r.code == kExitValidation);
  CHECK(r.err.find("action on unknown object A at line 2") != std::string::npos);
  CHECK(r.out.empty());
  fs::remove_all(dir);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"metrics"}).code == kExitUsage);
  CHECK(run({"simulate", "--profile", "sloppy", "--out", "x"}).code == kExitUsage);
  CHECK(run({"frobnicate"}).code == kExitUsage);
  CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("replay at a seq") {
  const auto r = run({"replay", "--log", testutil::fixture("diamond_moves.csv"), "--at-seq", "5"});
  REQUIRE(r.code == kExitOk);
  const auto j = Json::parse(r.out);
  CHECK(j["nodes"].size() == 5);
  CHECK(j["edges"].empty());
}

TEST_CASE("metrics output") {
  const auto r = run({"metrics", "--log", testutil::fixture("nested_stray.csv")});
  REQUIRE(r.code == kExitOk);
  const auto j = Json::parse(r.out);
  CHECK(j["metrics"]["max_simul_block"] == 2);
  CHECK(j["metrics"]["exact"]["perc_num_elements_with_moves"] == "3/20");
  CHECK(j["blocks"].size() == 2);
}

TEST_CASE("classify a model file, respecting the state cap") {
  const auto dir = scratch("model");
  REQUIRE(run({"replay", "--log", testutil::fixture("diamond_moves.csv"), "--out", (dir / "m.json").string()}).code ==
          kExitOk);
  auto r = run({"classify", "--model", (dir / "m.json").string(), "--pnml", (dir / "m.pnml").string()});
  REQUIRE(r.code == kExitOk);
  CHECK(Json::parse(r.out)["stage"] == "Sound");
  CHECK(fs::exists(dir / "m.pnml"));

  r = run({"classify", "--model", (dir / "m.json").string(), "--max-states", "2"});
  CHECK(Json::parse(r.out)["stage"] == "StateSpaceExceeded");

  ::setenv("PPMKIT_MAX_STATES", "2", 1);
  r = run({"classify", "--model", (dir / "m.json").string()});
  CHECK(Json::parse(r.out)["stage"] == "StateSpaceExceeded");
  ::setenv("PPMKIT_MAX_STATES", "lots", 1);
  CHECK(run({"classify", "--model", (dir / "m.json").string()}).code == kExitUsage);
  ::unsetenv("PPMKIT_MAX_STATES");
  fs::remove_all(dir);
}

TEST_CASE("simulate, classify a directory, then stats") {
  const auto dir = scratch("pipeline");
  const auto sim = (dir / "sim").string();
  const auto rep = (dir / "rep").string();
  REQUIRE(run({"simulate", "--profile", "structured", "--sessions", "6", "--seed", "3", "--out", sim}).code == 0);
  REQUIRE(run({"simulate", "--profile", "chaotic", "--sessions", "6", "--seed", "3", "--out", sim}).code == 0);
  CHECK(fs::exists(fs::path(sim) / "structured-001.csv"));
  REQUIRE(run({"classify", "--log", sim, "--out", rep}).code == 0);
  CHECK(fs::exists(fs::path(rep) / "chaotic-006.json"));

  const auto r = run({"stats", "--reports", rep, "--metric", "TotTime"});
  if (r.code == kExitOk) {
    const auto j = Json::parse(r.out);
    CHECK(j["rows"].size() == 1);
  } else {
    // Too few non-perspicuous sessions in a small cohort.
    CHECK(r.code == kExitValidation);
  }
  CHECK(run({"stats", "--reports", rep, "--metric", "Nope"}).code == kExitUsage);
  const auto text = run({"stats", "--reports", rep, "--format", "text"});
  CHECK((text.code == kExitOk || text.code == kExitValidation));
  fs::remove_all(dir);
}

TEST_CASE("chart writes SVG") {
  const auto r = run({"chart", "--log", testutil::fixture("preflight_17min.csv"), "--width", "600"});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.starts_with("<svg"));
  CHECK(run({"chart", "--log", testutil::fixture("preflight_17min.csv"), "--window", "60"}).code == kExitValidation);
}

TEST_CASE("stats names an empty group") {
  const auto dir = scratch("onegroup");
  const auto sim = (dir / "sim").string();
  const auto rep = (dir / "rep").string();
  REQUIRE(run({"simulate", "--profile", "structured", "--sessions", "3", "--seed", "1", "--out", sim}).code == 0);
  REQUIRE(run({"classify", "--log", sim, "--out", rep}).code == 0);
  const auto r = run({"stats", "--reports", rep});
  CHECK(r.code == kExitValidation);
  CHECK(r.err.find("group non-perspicuous empty") != std::string::npos);
  fs::remove_all(dir);
}
