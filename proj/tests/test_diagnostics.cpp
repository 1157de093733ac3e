#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "ariis/config.hpp"
#include "ariis/diagnostics.hpp"
#include "ariis/error.hpp"
#include "ariis/solver.hpp"
#include "ariis/units.hpp"

using namespace ariis;
namespace fs = std::filesystem;

namespace {

constexpr double kArea = std::numbers::pi * 1e-4;

TetMesh uniform_cylinder(double h = 0.0025) {
  CylinderGrading g;
  g.h_min = g.h_max = g.radial_size = h;
  return generate_cylinder_mesh(0.01, 0.1, g);
}

std::vector<ImmersedValve> closed_valves() {
  std::vector<ImmersedValve> v = preset_test_a().problem.valves;
  for (auto& x : v) {
    x.schedule.initial = ValveState::Closed;
    x.schedule.events.clear();
  }
  return v;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "ariis_test_diagnostics";
  fs::create_directories(dir);
  return dir / name;
}

LogRecord sample_record(double t, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1e4, 1e4);
  LogRecord r;
  r.t = t;
  r.p_LA = u(rng);
  r.p_LV = u(rng);
  r.p_LV_mean = u(rng);
  r.p_AA = u(rng);
  r.p_star = u(rng);
  r.chi_iso = 1;
  r.mv_closed = 1;
  r.av_closed = 0;
  r.C_MV = u(rng) * 1e-3;
  r.C_AV = std::numbers::pi;
  r.RI_MV = 1e-17 * u(rng);
  r.RI_AV = u(rng);
  r.p_estimate = std::numeric_limits<double>::quiet_NaN();
  r.V_LV = 1.885e-5;
  r.Q_MV = u(rng) * 1e-9;
  r.Q_AV = -0.0;
  r.u_cv = 0.1;
  r.iterations = 42;
  r.residual = 3.3e-9;
  return r;
}

}  // namespace

TEST_SUITE("diagnostics") {

TEST_CASE("compartment averages of constant, linear and zero fields") {
  const TetMesh m = uniform_cylinder();
  const auto valves = closed_valves();
  const CompartmentSpec lv{CompartmentId::LV, {}, std::nullopt};
  const std::vector<double> c(m.num_vertices(), 5.0), zero(m.num_vertices(), 0.0);
  CHECK(compartment_pressure(m, c, valves, 0.0, lv) == doctest::Approx(5.0).epsilon(1e-13));
  CHECK(compartment_pressure(m, zero, valves, 0.0, lv) == 0.0);

  std::vector<double> z(m.num_vertices());
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = m.vertices()[i].z;
  CHECK(compartment_pressure(m, z, valves, 0.0, lv) == doctest::Approx(0.05).epsilon(1e-6));
  CHECK(compartment_pressure(m, z, valves, 0.0, {CompartmentId::LA, {}, std::nullopt}) < 0.02);
  CHECK(compartment_pressure(m, z, valves, 0.0, {CompartmentId::AA, {}, std::nullopt}) > 0.08);

  const CompartmentSpec far{CompartmentId::LV, {}, ControlSphere{{0.0, 0.0, 0.0}, 1e-6}};
  CHECK_THROWS_AS(compartment_pressure(m, c, valves, 0.0, far), SolverError);
}

TEST_CASE("closed bands are excluded from the averages") {
  const TetMesh m = uniform_cylinder();
  auto valves = closed_valves();
  std::vector<double> p(m.num_vertices(), 1.0);
  // Vertices on the MV plane only touch band cells.
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (std::abs(m.vertices()[i].z - 0.02) < 1e-12) p[i] = 1e6;
  }
  const CompartmentSpec lv{CompartmentId::LV, {}, std::nullopt};
  CHECK(compartment_pressure(m, p, valves, 0.0, lv) == doctest::Approx(1.0).epsilon(1e-13));
  valves[0].schedule.initial = ValveState::Open;
  CHECK(compartment_pressure(m, p, valves, 0.0, lv) > 1.0);
}

TEST_CASE("ventricular volume") {
  TetMesh m = uniform_cylinder();
  auto valves = closed_valves();
  const double v0 = ventricular_volume(m, valves);
  CHECK(std::abs(v0 - 1.885e-5) / 1.885e-5 < 0.02);

  const Vec3 shift{0.001, -0.002, 0.003};
  std::vector<Vec3> moved(m.reference_vertices().begin(), m.reference_vertices().end());
  for (auto& x : moved) x += shift;
  m.set_current_vertices(moved);
  for (auto& v : valves) v = translated(v, shift);
  CHECK(ventricular_volume(m, valves) == doctest::Approx(v0).epsilon(1e-12));
}

TEST_CASE("default probe sits one band width into the ventricle") {
  const auto valves = closed_valves();
  const ControlSphere s = default_lv_probe(find_valve(valves, ValveId::MV), 0.01);
  CHECK(s.center.x == 0.0);
  CHECK(s.center.y == 0.0);
  CHECK(s.center.z == doctest::Approx(0.024).epsilon(1e-14));
  CHECK(s.radius == doctest::Approx(0.0025).epsilon(1e-14));
}

TEST_CASE("pressure estimate") {
  const TetMesh m = uniform_cylinder();
  auto valves = closed_valves();
  const std::vector<Vec3> still(m.num_vertices());
  const double p = pressure_estimate(m, still, still, valves, 0.1, 0.0, units::mmhg(75.0));
  CHECK(units::to_mmhg(p) == doctest::Approx(37.5).epsilon(1e-12));

  const double a = 5.0, b = 8.0;
  CHECK(pressure_estimate(m, still, still, valves, 0.1, a, b, std::vector<double>{2.0, -4.0}) ==
        doctest::Approx((a + b + 2.0 - 4.0) / 2.0).epsilon(1e-14));

  valves[0].area = 2.0 * kArea;
  CHECK(pressure_estimate(m, still, still, valves, 0.1, a, b) == doctest::Approx((2.0 * a + b) / 3.0).epsilon(1e-14));
  CHECK_THROWS_AS(pressure_estimate(m, still, still, valves, 0.1, a, b, std::vector<double>{1.0}), SolverError);

  valves[1].schedule.initial = ValveState::Open;
  CHECK_THROWS_AS(pressure_estimate(m, still, still, valves, 0.1, a, b), SolverError);
}

TEST_CASE("relative pressure error") {
  const std::vector<double> star{units::mmhg(75.0), units::mmhg(100.0), units::mmhg(40.0), 0.0};
  const std::vector<int> chi{1, 1, 1, 0};
  CHECK(relative_pressure_error(star, star, chi) == 0.0);

  std::vector<double> off = star;
  for (double& v : off) v += units::mmhg(1.0);
  CHECK(relative_pressure_error(off, star, chi) == doctest::Approx(0.01).epsilon(1e-12));

  // Excursions outside the iso window do not count.
  off = star;
  off[3] = 1e9;
  CHECK(relative_pressure_error(off, star, chi) == 0.0);

  CHECK_THROWS_AS(relative_pressure_error(star, star, std::vector<int>{0, 0, 0, 0}), SolverError);
  CHECK_THROWS_AS(relative_pressure_error(star, star, std::vector<int>{1, 1}), SolverError);

  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-1e4, 1e4);
  std::bernoulli_distribution coin(0.4);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> a(200), s(200);
    std::vector<int> c(200);
    double num = 0.0, den = 0.0;
    for (int i = 0; i < 200; ++i) {
      a[i] = u(rng);
      s[i] = u(rng);
      c[i] = coin(rng) ? 1 : 0;
      if (c[i]) {
        num = std::max(num, std::abs(a[i] - s[i]));
        den = std::max(den, std::abs(s[i]));
      }
    }
    if (den == 0.0) continue;
    const double e = relative_pressure_error(a, s, c);
    CHECK(e == doctest::Approx(num / den).epsilon(1e-15));
    for (int i = 0; i < 200; ++i) {
      a[i] *= 7.5;
      s[i] *= 7.5;
    }
    CHECK(relative_pressure_error(a, s, c) == doctest::Approx(e).epsilon(1e-14));
  }
}

TEST_CASE("valve flux") {
  const TetMesh m = uniform_cylinder();
  const auto valves = closed_valves();
  const std::size_t nv = m.num_vertices();
  std::vector<Vec3> w(nv, Vec3{0.01, 0.0, 0.3});
  for (const auto& v : valves) CHECK(valve_flux(m, w, w, v) == 0.0);

  const double speed = 0.2;
  double section = 0.0;
  {
    // Polygonal section of the mesh: flux of a unit normal field.
    std::vector<Vec3> one(nv, Vec3{0.0, 0.0, 1.0}), zero(nv);
    section = std::abs(valve_flux(m, one, zero, valves[0]));
  }
  CHECK(std::abs(section - kArea) / kArea < 0.02);
  for (const auto& v : valves) {
    std::vector<Vec3> u(nv, speed * v.normal), zero(nv);
    CHECK(valve_flux(m, u, zero, v) == doctest::Approx(speed * section).epsilon(1e-10));
  }
  // Off-layer plane cuts through cells.
  ImmersedValve mid = valves[1];
  mid.plane_point.z = 0.0512;
  std::vector<Vec3> u(nv, speed * mid.normal), zero(nv);
  CHECK(valve_flux(m, u, zero, mid) == doctest::Approx(speed * section).epsilon(1e-10));
}

TEST_CASE("CSV log round trip and schema checks") {
  std::mt19937 rng(9);
  TimeSeriesLog log;
  for (int i = 1; i <= 20; ++i) log.append(sample_record(1e-3 * i, rng));
  CHECK_THROWS_AS(log.append(sample_record(1e-3, rng)), SolverError);

  const auto p = scratch("log.csv");
  export_csv(log, p.string());
  const TimeSeriesLog back = read_csv(p.string());
  REQUIRE(back.size() == log.size());
  for (const auto& name : TimeSeriesLog::header()) {
    const auto a = log.column(name), b = back.column(name);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (std::isnan(a[i])) {
        CHECK(std::isnan(b[i]));
      } else {
        CHECK(b[i] == a[i]);
      }
    }
  }
  CHECK_THROWS_AS(log.column("no_such_column"), ConfigError);

  const auto empty = scratch("empty.csv");
  export_csv(TimeSeriesLog{}, empty.string());
  CHECK(read_csv(empty.string()).empty());

  const auto bad = scratch("bad.csv");
  {
    std::ofstream out(bad);
    out << "t,p\n0.001,1\n";
  }
  CHECK_THROWS_AS(read_csv(bad.string()), ConfigError);
  CHECK_THROWS_AS(read_csv(scratch("missing.csv").string()), IoError);
}

TEST_CASE("VTU snapshot lists every field") {
  const TetMesh m = uniform_cylinder();
  const auto valves = closed_valves();
  const std::size_t nv = m.num_vertices();
  std::vector<Vec3> u(nv, Vec3{0, 0, 1}), d(nv), w(nv);
  std::vector<double> p(nv, 2.0);
  for (bool binary : {true, false}) {
    const auto path = scratch(binary ? "snap_b.vtu" : "snap_a.vtu");
    export_vtu(m, {u, p, d, w}, valves, 0.0, path.string(), binary);
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    CHECK(text.find("UnstructuredGrid") != std::string::npos);
    for (const char* name : {"velocity", "pressure", "valve_band", "compartment"}) {
      CHECK(text.find(std::string("Name=\"") + name + "\"") != std::string::npos);
    }
  }
  CHECK_THROWS_AS(export_vtu(m, {u, p, d, w}, valves, 0.0, "/nonexistent/dir/x.vtu"), IoError);
}

}  // TEST_SUITE
