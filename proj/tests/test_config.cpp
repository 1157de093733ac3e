#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <numbers>

#include "ariis/config.hpp"
#include "ariis/error.hpp"
#include "ariis/table.hpp"
#include "ariis/units.hpp"

using namespace ariis;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "ariis_test_config";
  fs::create_directories(dir);
  return dir / name;
}

std::string error_text(const json& doc) {
  try {
    parse_config(doc);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("Test A preset") {
  const RunConfig c = preset_test_a();
  const auto& pb = c.problem;
  CHECK(c.name == "testA");
  CHECK(units::to_mmhg(pb.pressures.outlet(0.1)) == doctest::Approx(75.0).epsilon(1e-12));
  CHECK(pb.pressures.inlet(0.1) == 0.0);
  CHECK(pb.params.dt == 1e-3);
  CHECK(pb.params.T == 0.2);
  CHECK(pb.params.rho == 1.06e3);
  CHECK(pb.params.mu == 3.5e-3);
  CHECK(pb.ariis.enabled);
  REQUIRE(pb.valves.size() == 2);
  CHECK(pb.valves[0].id == ValveId::MV);
  for (const auto& v : pb.valves) {
    CHECK(v.half_thickness == 0.002);
    CHECK(v.resistance == 1e4);
    CHECK(v.area == doctest::Approx(std::numbers::pi * 1e-4).epsilon(1e-14));
  }
  CHECK(pb.valves[0].normal.z == -1.0);
  CHECK(pb.valves[1].normal.z == 1.0);
  CHECK(units::to_mmhg(pb.ariis.p_star(0.1)) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(units::to_mmhg(pb.ariis.p_star(0.03)) == doctest::Approx(75.0).epsilon(1e-12));
  const auto& law = std::get<RadialPulseLaw>(pb.law);
  CHECK(law.amplitude(0.05) == -1.0);
  CHECK(law.w_bar == 4.6e-4);
}

TEST_CASE("Test B preset") {
  const RunConfig c = preset_test_b();
  const auto& pb = c.problem;
  CHECK(units::to_mmhg(pb.pressures.outlet(0.0)) == doctest::Approx(80.0).epsilon(1e-12));
  CHECK(valve_state(find_valve(pb.valves, ValveId::MV), 0.005) == ValveState::Open);
  CHECK(valve_state(find_valve(pb.valves, ValveId::MV), 0.01) == ValveState::Closed);
  CHECK(valve_state(find_valve(pb.valves, ValveId::AV), 0.04) == ValveState::Open);
  const auto& law = std::get<ShorteningLaw>(pb.law);
  const double v0 = std::numbers::pi * 1e-4 * 0.06;
  CHECK(law.length(0.1) == doctest::Approx(0.05).epsilon(1e-14));
  CHECK(law.volume(0.11) == doctest::Approx(0.7 * v0).epsilon(1e-14));
  CHECK(law.volume(0.0) == doctest::Approx(v0).epsilon(1e-14));
}

TEST_CASE("shipped config files parse to the presets") {
  for (const char* name : {"testA", "testB"}) {
    const fs::path file = fs::path(ARIIS_SOURCE_DIR) / "configs" / (std::string(name) + ".json");
    const RunConfig a = parse_config(load_config_file(file.string()));
    const RunConfig b = parse_config(preset_json(name));
    CHECK(a.name == b.name);
    CHECK(a.problem.valves[1].schedule.events.size() == b.problem.valves[1].schedule.events.size());
    CHECK(a.problem.ariis.p_star(0.1) == b.problem.ariis.p_star(0.1));
    CHECK(a.mesh.grading.h_min == b.mesh.grading.h_min);
  }
}

TEST_CASE("quantities with units") {
  CHECK(parse_quantity(json("75 mmHg")) == doctest::Approx(75.0 * 133.322).epsilon(1e-14));
  CHECK(parse_quantity(json("2 mm")) == doctest::Approx(0.002).epsilon(1e-14));
  CHECK(parse_quantity(json("1.5 kPa")) == doctest::Approx(1500.0).epsilon(1e-14));
  CHECK(parse_quantity(json("10 ms")) == doctest::Approx(0.01).epsilon(1e-14));
  CHECK(parse_quantity(json(3.0), "mmHg") == doctest::Approx(3.0 * 133.322).epsilon(1e-14));
  CHECK(parse_quantity(json("3"), "mm") == doctest::Approx(0.003).epsilon(1e-14));
  CHECK_THROWS_AS(parse_quantity(json("3 furlongs")), ConfigError);
  CHECK_THROWS_AS(parse_quantity(json("abc")), ConfigError);
  CHECK_THROWS_AS(parse_quantity(json("1 mm extra")), ConfigError);
  CHECK_THROWS_AS(parse_quantity(json::array()), ConfigError);
}

TEST_CASE("time tables") {
  const PiecewiseLinear c = parse_table(json("80 mmHg"));
  CHECK(c.is_constant());
  const PiecewiseLinear t = parse_table(json{{"unit", "mmHg"}, {"table", {{0.0, 0.0}, {0.1, 10.0}}}});
  CHECK(units::to_mmhg(t(0.05)) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(units::to_mmhg(t(1.0)) == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(t(-1.0) == 0.0);

  const auto path = scratch("table.csv");
  {
    std::ofstream out(path);
    out << "# pressure\ntime,value\n0,0\n0.1,20\n";
  }
  const PiecewiseLinear f = parse_table(json{{"csv", path.string()}, {"unit", "mmHg"}});
  CHECK(units::to_mmhg(f(0.025)) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK_THROWS_AS(parse_table(json{{"csv", scratch("nope.csv").string()}}), IoError);
  CHECK_THROWS_AS(parse_table(json{{0.1, 1.0}, {0.05, 2.0}}), ConfigError);
  CHECK_THROWS_AS(parse_table(json::array()), ConfigError);
}

TEST_CASE("overrides") {
  json doc = preset_json("testA");
  apply_override(doc, "valves.*.resistance=1e5");
  apply_override(doc, "time.T=0.05");
  apply_override(doc, "boundary.outlet=70 mmHg");
  apply_override(doc, "ariis.enabled=false");
  const RunConfig c = parse_config(doc);
  for (const auto& v : c.problem.valves) CHECK(v.resistance == 1e5);
  CHECK(c.problem.params.T == 0.05);
  CHECK(units::to_mmhg(c.problem.pressures.outlet(0.0)) == doctest::Approx(70.0).epsilon(1e-12));
  CHECK_FALSE(c.problem.ariis.enabled);
  REQUIRE(doc["overrides"].size() == 4);
  CHECK(doc["overrides"][0] == "valves.*.resistance=1e5");
  CHECK(c.resolved["overrides"].size() == 4);

  apply_override(doc, "valves.MV.point.2=0.025");
  CHECK(doc["valves"]["MV"]["point"][2] == 0.025);

  CHECK_THROWS_AS(apply_override(doc, "nope.T=1"), ConfigError);
  apply_override(doc, "time.nope=1");
  CHECK_THROWS_WITH_AS(parse_config(doc), doctest::Contains("time.nope: unknown key"), ConfigError);
  CHECK_THROWS_AS(apply_override(doc, "no_equals"), ConfigError);
  CHECK_THROWS_AS(apply_override(doc, "=1"), ConfigError);
  CHECK_THROWS_AS(apply_override(doc, "valves.MV.point.7=1"), ConfigError);
}

TEST_CASE("every problem is reported at once") {
  json doc = preset_json("testA");
  doc["time"]["dt"] = -1.0;
  doc["valves"]["MV"]["epsilon"] = 0.0;
  doc["fluid"]["viscosity"] = 1.0;
  doc["valves"]["AV"]["initial"] = "ajar";
  const std::string msg = error_text(doc);
  CHECK(msg.find("4 problems") != std::string::npos);
  CHECK(msg.find("time.dt") != std::string::npos);
  CHECK(msg.find("valves.MV") != std::string::npos);
  CHECK(msg.find("fluid.viscosity: unknown key") != std::string::npos);
  CHECK(msg.find("ajar") != std::string::npos);
}

TEST_CASE("tables must cover the simulated interval") {
  json doc = preset_json("testA");
  doc["time"]["T"] = 0.3;
  CHECK(error_text(doc).find("motion.amplitude") != std::string::npos);
  doc = preset_json("testB");
  doc["motion"]["length"] = {{0.0, 0.06}, {0.2, -0.01}};
  CHECK(error_text(doc).find("L* must be positive") != std::string::npos);
  CHECK_THROWS_AS(preset_json("testC"), ConfigError);
}

TEST_CASE("bad config files") {
  CHECK_THROWS_AS(load_config_file(scratch("absent.json").string()), IoError);
  const auto p = scratch("broken.json");
  {
    std::ofstream out(p);
    out << "{ \"time\": ";
  }
  CHECK_THROWS_AS(load_config_file(p.string()), ConfigError);
}

}  // TEST_SUITE
