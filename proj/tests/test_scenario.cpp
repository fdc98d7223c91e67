#include "helpers.hpp"

#include "bitime/scenario.hpp"

#include <doctest.h>

#include <cstdio>
#include <fstream>

using namespace testing;
using namespace bitime::scenario;
using nlohmann::json;

namespace {

std::string error_field(const json& j) {
  try {
    from_json(j);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<none>";
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("templates round-trip") {
  for (const auto& name : template_names()) {
    CAPTURE(name);
    const auto s = make_template(name);
    const json j = to_json(s);
    const auto back = from_json(j);
    CHECK(to_json(back) == j);
    CHECK(back.name() == name);
    CHECK(back.nodes == std::vector<std::size_t>{101, 101});
    CHECK(back.points.size() >= 2);
  }
  CHECK_THROWS_AS(make_template("nope"), bitime::InvalidArgument);
}

TEST_CASE("config errors name the field") {
  const json base = to_json(make_template("eikonal"));
  auto j = base;
  j.erase("id");
  CHECK(error_field(j) == "/id");
  j = base;
  j["schemaVersion"] = 2;
  CHECK(error_field(j) == "/schemaVersion");
  j = base;
  j["box"]["lower"] = {1.0, -1.0};
  CHECK(error_field(j) == "/box");
  j = base;
  j["points"][1]["beta"] = {3.0, 0.0};
  CHECK(error_field(j) == "/points/1/beta");
  j = base;
  j["backend"] = "magic";
  CHECK(error_field(j) == "/backend");
  j = base;
  j["system"] = {{"kind", "ball"}, {"dimension", 2}, {"center", {"0", "0"}}, {"radius", 1.0}};
  j["backend"] = "closed_form";
  CHECK(error_field(j) == "/backend");
  j = base;
  j["system"] = {{"kind", "blob"}, {"dimension", 2}};
  CHECK(error_field(j) == "/system/kind");
  j = base;
  j["tolerances"]["eps"] = -1.0;
  CHECK(error_field(j) == "/tolerances/eps");
  j = base;
  j["grid"]["nodes"] = 2;
  CHECK(error_field(j) == "/grid/nodes");
  CHECK(error_field(json::array()) == "");
}

TEST_CASE("tolerance defaults follow the backend") {
  auto j = to_json(make_template("box"));
  j.erase("tolerances");
  CHECK(from_json(j).tolerances.tol_h == doctest::Approx(0.02));
  j["backend"] = "grid";
  CHECK(from_json(j).tolerances.tol_h == doctest::Approx(0.1));
}

TEST_CASE("loading files") {
  const std::string path = "bitime_scenario_test.json";
  {
    std::ofstream out(path);
    out << "{\n  \"id\": \"x\",\n  oops\n}\n";
  }
  try {
    load(path);
    FAIL("expected a syntax error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  {
    std::ofstream out(path);
    out << to_json(make_template("halfball")).dump(2);
  }
  const auto s = load(path);
  CHECK(s.system.builtin);
  CHECK(s.system.builtin->axis == 0);
  std::remove(path.c_str());
  CHECK_THROWS_AS(load("does/not/exist.json"), ConfigError);
}

}  // TEST_SUITE
