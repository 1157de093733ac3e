#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "ariis/config.hpp"
#include "ariis/driver.hpp"
#include "ariis/error.hpp"
#include "ariis/units.hpp"

using namespace ariis;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "ariis_test_driver" / name;
  fs::remove_all(dir);
  return dir;
}

// Test A on a very coarse mesh.
nlohmann::json tiny(const std::string& out, double T) {
  nlohmann::json doc = preset_json("testA");
  doc["mesh"]["generate"]["h_min"] = 0.005;
  doc["mesh"]["generate"]["h_max"] = 0.005;
  doc["mesh"]["generate"]["radial_size"] = 0.005;
  doc["time"]["T"] = T;
  doc["probe"]["radius"] = 0.006;
  doc["output"]["directory"] = scratch(out).string();
  return doc;
}

TimeSeriesLog synthetic_log(double offset_mmhg) {
  TimeSeriesLog log;
  for (int i = 1; i <= 100; ++i) {
    LogRecord r;
    r.t = 1e-3 * i;
    r.chi_iso = (i > 20 && i < 60) ? 1 : 0;
    r.p_star = units::mmhg(i < 40 ? 100.0 : 50.0);
    r.p_LV = r.p_star + units::mmhg(offset_mmhg);
    r.u_cv = 0.1 * i;
    log.append(r);
  }
  return log;
}

}  // namespace

TEST_SUITE("driver") {

TEST_CASE("snapshot stride and output files") {
  nlohmann::json doc = tiny("stride", 0.2);
  doc["output"]["snapshot_stride"] = 10;
  const RunConfig cfg = parse_config(doc);
  const RunSummary s = run_simulation(cfg);
  CHECK(s.snapshots == 21);
  CHECK(s.log.size() == 200);
  const fs::path dir = cfg.output.directory;
  CHECK(fs::exists(dir / "resolved_config.json"));
  CHECK(fs::exists(dir / "log.csv"));
  CHECK(fs::exists(dir / "snapshots.pvd"));
  CHECK(fs::exists(dir / "snapshot_00000.vtu"));
  CHECK(fs::exists(dir / "snapshot_00200.vtu"));
  CHECK_FALSE(fs::exists(dir / "snapshot_00205.vtu"));

  const TimeSeriesLog back = read_csv((dir / "log.csv").string());
  CHECK(back.size() == 200);
  CHECK(back.records().front().t == doctest::Approx(1e-3));
  CHECK(s.relative_error.has_value());
  for (const auto& r : s.log.records()) {
    CHECK(std::isfinite(r.p_LV));
    CHECK(std::isnan(r.p_estimate) == (r.chi_iso == 0));
  }
}

TEST_CASE("runs are deterministic") {
  const RunConfig cfg = parse_config(tiny("det", 0.01));
  RunOptions opt;
  opt.write_files = false;
  const RunSummary a = run_simulation(cfg, opt);
  const RunSummary b = run_simulation(cfg, opt);
  REQUIRE(a.log.size() == b.log.size());
  for (const auto& name : TimeSeriesLog::header()) {
    const auto x = a.log.column(name), y = b.log.column(name);
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (std::isnan(x[i])) {
        CHECK(std::isnan(y[i]));
      } else {
        CHECK(x[i] == y[i]);
      }
    }
  }
}

TEST_CASE("sweeps") {
  const nlohmann::json base = tiny("sweep", 0.003);
  CHECK_THROWS_AS(run_sweep(base, "valves.*.resistance", {}), ConfigError);
  CHECK_THROWS_AS(run_sweep(base, "valves.*.nope", {1.0}), ConfigError);

  const auto one = run_sweep(base, "valves.*.resistance", {1e5});
  REQUIRE(one.size() == 1);
  CHECK(one[0].value == 1e5);
  CHECK(one[0].status == "ok");
  CHECK(fs::exists(fs::path(base["output"]["directory"].get<std::string>()) / "sweep.csv"));

  const auto rows = run_sweep(base, "solver.max_iterations", {2000, 1, 2000});
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].status == "ok");
  CHECK(rows[1].status.find("failed") == 0);
  CHECK(rows[1].status.find("step 1") != std::string::npos);
  CHECK(std::isnan(rows[1].relative_error));
  CHECK(rows[2].status == "ok");
}

TEST_CASE("postprocess") {
  const TimeSeriesLog ref = synthetic_log(0.0);
  const PostprocessReport same = postprocess(ref, &ref);
  REQUIRE(same.relative_error);
  CHECK(*same.relative_error == 0.0);
  CHECK(*same.max_out_of_iso_dp == 0.0);
  CHECK(*same.max_out_of_iso_du_rel == 0.0);

  const TimeSeriesLog off = synthetic_log(1.0);
  const PostprocessReport r = postprocess(off, &ref);
  CHECK(*r.relative_error == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(*r.max_out_of_iso_dp == doctest::Approx(units::mmhg(1.0)).epsilon(1e-12));
  CHECK(format_report(r).find("relative_pressure_error") != std::string::npos);

  TimeSeriesLog noiso;
  LogRecord rec;
  rec.t = 0.001;
  noiso.append(rec);
  CHECK_FALSE(postprocess(noiso).relative_error.has_value());
  CHECK_THROWS_AS(postprocess(noiso, &ref), ConfigError);
}

}  // TEST_SUITE
