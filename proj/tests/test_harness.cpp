#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "warpcone/config.hpp"
#include "warpcone/scenario.hpp"

using namespace warpcone;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Config rotation_scenario(const std::string& name, const std::string& kind) {
  Config c;
  c.set("scenario", "name", name);
  c.set("scenario", "kind", kind);
  c.set("space", "kind", "torus");
  c.set("space", "resolution", "8");
  c.set("space", "dim", "1");
  c.set("action", "kind", "cyclic-rotation");
  c.set("action", "mod", "8");
  c.set("action", "shift", "1/8");
  c.set("params", "levels", "2,10");
  return c;
}

std::filesystem::path fresh_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() / ("warpcone_test_" + tag);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("config files round trip through write and parse") {
  Config c = rotation_scenario("demo", "warp-metric");
  std::ostringstream out;
  write_config(c, out);
  std::istringstream in(out.str());
  Config back = parse_config(in, "demo.cfg");
  CHECK(back.get("scenario", "kind") == "warp-metric");
  CHECK(back.geti("action", "mod") == 8);
  CHECK(back.getd("action", "shift") == 0.125);
  auto levels = back.list("params", "levels");
  REQUIRE(levels.size() == 2);
  CHECK(levels[0] == "2");
  CHECK(levels[1] == "10");
}

TEST_CASE("parse errors carry the file name and line number") {
  auto expect_message = [](const std::string& text, const std::string& needle) {
    std::istringstream in(text);
    try {
      parse_config(in, "bad.cfg");
      FAIL("expected a parse error");
    } catch (const std::runtime_error& e) {
      std::string what = e.what();
      CHECK(what.find(needle) != std::string::npos);
    }
  };
  expect_message("[a]\nkey value\n", "bad.cfg:2");
  expect_message("key = value\n", "bad.cfg:1");
  expect_message("[unterminated\n", "bad.cfg:1");
  expect_message("[]\n", "bad.cfg:1");
}

TEST_CASE("missing keys name the section and key") {
  Config c = rotation_scenario("demo", "warp-metric");
  try {
    c.get("params", "absent");
    FAIL("expected a lookup error");
  } catch (const std::runtime_error& e) {
    std::string what = e.what();
    CHECK(what.find("params") != std::string::npos);
    CHECK(what.find("absent") != std::string::npos);
  }
  CHECK(c.get_or("params", "absent", "x") == "x");
  CHECK(c.geti_or("params", "absent", 3) == 3);
  CHECK(c.getd_or("params", "absent", 0.5) == 0.5);
}

TEST_CASE("experiment and config kind must agree") {
  Config c = rotation_scenario("demo", "warp-metric");
  auto dir = fresh_dir("kind");
  RunOptions opt;
  opt.out_dir = dir.string();
  CHECK(run_scenario(c, "quotient-check", opt).exit_code == 2);
  CHECK(run_scenario(c, "no-such-kind", opt).exit_code == 2);
  Config missing;
  missing.set("scenario", "name", "x");
  missing.set("scenario", "kind", "warp-metric");
  CHECK(run_scenario(missing, "warp-metric", opt).exit_code == 2);
}

TEST_CASE("scenario outputs are byte identical across reruns") {
  Config c = rotation_scenario("det", "warp-metric");
  auto d1 = fresh_dir("det1");
  auto d2 = fresh_dir("det2");
  RunOptions o1, o2;
  o1.out_dir = d1.string();
  o2.out_dir = d2.string();
  RunOutcome r1 = run_scenario(c, "warp-metric", o1);
  RunOutcome r2 = run_scenario(c, "warp-metric", o2);
  REQUIRE(r1.exit_code == 0);
  REQUIRE(r2.exit_code == 0);
  REQUIRE(r1.outputs == r2.outputs);
  for (const auto& f : r1.outputs) CHECK(slurp(d1 / f) == slurp(d2 / f));
}

TEST_CASE("manifests embed the whole input config and a run header") {
  Config c = rotation_scenario("mani", "quotient-check");
  c.set("params", "expect_exact", "1");
  auto dir = fresh_dir("mani");
  RunOptions opt;
  opt.out_dir = dir.string();
  RunOutcome r = run_scenario(c, "quotient-check", opt);
  REQUIRE(r.exit_code == 0);
  Config m = parse_config_file((dir / "mani.manifest").string());
  CHECK(m.get("run", "experiment") == "quotient-check");
  CHECK(m.get("run", "status") == "pass");
  CHECK(m.get("scenario", "name") == "mani");
  CHECK(m.get("space", "kind") == "torus");
  CHECK(m.get("action", "shift") == "1/8");
  CHECK(m.get("params", "expect_exact") == "1");
}

TEST_CASE("assertion failures exit with code one and a witness") {
  // a snapped orbit cannot agree exactly, so expect_exact trips
  Config c = rotation_scenario("fail", "quotient-check");
  c.set("action", "kind", "rotation");
  c.set("action", "shift", "1/3");
  c.set("params", "levels", "4");
  c.set("params", "expect_exact", "1");
  auto dir = fresh_dir("fail");
  RunOptions opt;
  opt.out_dir = dir.string();
  RunOutcome r = run_scenario(c, "quotient-check", opt);
  CHECK(r.exit_code == 1);
  REQUIRE(!r.failures.empty());
  CHECK(r.failures[0].find("expected exact agreement") != std::string::npos);
  Config m = parse_config_file((dir / "fail.manifest").string());
  CHECK(m.get("run", "status") == "fail");
}

TEST_CASE("wrapped spaces build the lifted actions") {
  Config c = rotation_scenario("wrap", "warp-metric");
  c.set("space", "wrap", "ext");
  BuiltAction ext = make_built_action(c);
  CHECK(ext.space->size() == ext.inner_space->size() + 1);
  CHECK(ext.wrap == "ext");
  c.set("space", "wrap", "cone");
  c.set("space", "thetas", "1/2,1");
  BuiltAction cone = make_built_action(c);
  CHECK(cone.space->size() == 2 * cone.inner_space->size() + 1);
  CHECK(cone.action.group.gens.size() == cone.inner.group.gens.size());
}

TEST_CASE("unknown space and action kinds are rejected") {
  Config c = rotation_scenario("bad", "warp-metric");
  c.set("space", "kind", "plane");
  CHECK_THROWS_AS(make_built_action(c), std::invalid_argument);
  c.set("space", "kind", "torus");
  c.set("action", "kind", "twist");
  CHECK_THROWS_AS(make_built_action(c), std::invalid_argument);
}
