#include "ariis/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "ariis/error.hpp"
#include "ariis/mesh_io.hpp"
#include "ariis/units.hpp"

namespace ariis {

using nlohmann::json;

namespace {

double unit_factor(const std::string& unit) {
  if (unit.empty() || unit == "Pa" || unit == "m" || unit == "s" || unit == "SI") return 1.0;
  if (unit == "mmHg") return units::pa_per_mmhg;
  if (unit == "kPa") return 1e3;
  if (unit == "mm") return 1e-3;
  if (unit == "cm") return 1e-2;
  if (unit == "ms") return 1e-3;
  if (unit == "ml" || unit == "mL") return 1e-6;
  throw ConfigError("unknown unit '" + unit + "'");
}

/// Collects every validation problem before failing.
class Checker {
 public:
  void fail(const std::string& path, const std::string& msg) { errors_.push_back(path + ": " + msg); }

  template <class F>
  void guard(const std::string& path, F&& f) {
    try {
      f();
    } catch (const Error& e) {
      fail(path, e.what());
    } catch (const json::exception& e) {
      fail(path, e.what());
    }
  }

  void known_keys(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
    if (!obj.is_object()) {
      fail(path, "expected an object");
      return;
    }
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [k, v] : obj.items()) {
      (void)v;
      if (!allowed.count(k)) fail(path.empty() ? k : path + "." + k, "unknown key");
    }
  }

  void finish() const {
    if (errors_.empty()) return;
    std::ostringstream msg;
    msg << "invalid configuration (" << errors_.size() << " problem" << (errors_.size() > 1 ? "s" : "") << "):";
    for (const auto& e : errors_) msg << "\n  " << e;
    throw ConfigError(msg.str());
  }

 private:
  std::vector<std::string> errors_;
};

const json& child(const json& doc, const char* key) {
  static const json empty = json::object();
  if (doc.is_object() && doc.contains(key)) return doc.at(key);
  return empty;
}

Vec3 parse_vec3(const json& v) {
  if (!v.is_array() || v.size() != 3) throw ConfigError("expected a 3-vector");
  return {parse_quantity(v[0]), parse_quantity(v[1]), parse_quantity(v[2])};
}

ValveState parse_state(const json& v) {
  const std::string s = v.get<std::string>();
  if (s == "open" || s == "Open") return ValveState::Open;
  if (s == "closed" || s == "Closed") return ValveState::Closed;
  throw ConfigError("valve state must be 'open' or 'closed', got '" + s + "'");
}

json table_pairs(std::initializer_list<std::pair<double, double>> rows) {
  json t = json::array();
  for (const auto& [a, b] : rows) t.push_back({a, b});
  return t;
}

json common_preset() {
  json d;
  d["geometry"] = {{"radius", 0.01}, {"L_LA", 0.02}, {"L_LV", 0.06}, {"L_AA", 0.02}};
  d["mesh"] = {{"generate",
                {{"h_min", 0.001}, {"h_max", 0.0046}, {"radial_size", 0.00167}, {"growth", 0.3}, {"band_width", 0.006}}}};
  d["fluid"] = {{"rho", 1.06e3}, {"mu", 3.5e-3}};
  d["time"] = {{"dt", 1e-3}, {"T", 0.2}};
  d["solver"] = {{"rtol", 1e-8}, {"max_iterations", 2000}, {"restart", 150}, {"c_inv", 36.0}, {"tau_reaction", 4.0}, {"grad_div", true}};
  const double area = std::numbers::pi * 0.01 * 0.01;
  d["valves"]["MV"] = {{"point", {0.0, 0.0, 0.02}}, {"normal", {0.0, 0.0, -1.0}}, {"epsilon", 0.002},
                       {"resistance", 1e4},        {"area", area}};
  d["valves"]["AV"] = {{"point", {0.0, 0.0, 0.08}}, {"normal", {0.0, 0.0, 1.0}}, {"epsilon", 0.002},
                       {"resistance", 1e4},        {"area", area}};
  d["ariis"] = {{"enabled", true}, {"ext_pressure", "boundary"}, {"discrete_area", false}};
  d["probe"] = {{"radius", 0.0}};
  d["output"] = {{"directory", "output"}, {"csv", "log.csv"}, {"snapshot_stride", 0}, {"binary", true}};
  return d;
}

}  // namespace

double parse_quantity(const json& value, const std::string& default_unit) {
  if (value.is_number()) return value.get<double>() * unit_factor(default_unit);
  if (value.is_string()) {
    std::istringstream ss(value.get<std::string>());
    double v = 0.0;
    if (!(ss >> v)) throw ConfigError("cannot parse quantity '" + value.get<std::string>() + "'");
    std::string unit;
    ss >> unit;
    std::string rest;
    if (ss >> rest) throw ConfigError("cannot parse quantity '" + value.get<std::string>() + "'");
    return v * unit_factor(unit.empty() ? default_unit : unit);
  }
  throw ConfigError("expected a number or a quantity string");
}

PiecewiseLinear parse_table(const json& value, const std::string& default_unit) {
  if (value.is_number() || value.is_string()) return PiecewiseLinear(parse_quantity(value, default_unit));
  std::string unit = default_unit;
  const json* rows = &value;
  if (value.is_object()) {
    if (value.contains("unit")) unit = value.at("unit").get<std::string>();
    if (value.contains("csv")) {
      return read_table_csv(value.at("csv").get<std::string>()).scaled(unit_factor(unit));
    }
    if (!value.contains("table")) throw ConfigError("table object needs 'table' or 'csv'");
    rows = &value.at("table");
  }
  if (!rows->is_array() || rows->empty()) throw ConfigError("table must be a non-empty array of [t, value] pairs");
  std::vector<double> t, v;
  for (const auto& r : *rows) {
    if (!r.is_array() || r.size() != 2) throw ConfigError("table rows must be [t, value] pairs");
    t.push_back(parse_quantity(r[0], "s"));
    v.push_back(parse_quantity(r[1], unit));
  }
  return PiecewiseLinear(std::move(t), std::move(v));
}

json preset_json(const std::string& name) {
  json d = common_preset();
  d["name"] = name;
  if (name == "testA") {
    d["boundary"] = {{"inlet", "0 mmHg"}, {"outlet", "75 mmHg"}};
    d["valves"]["MV"]["initial"] = "closed";
    d["valves"]["MV"]["events"] = json::array({{0.08, "open"}, {0.14, "closed"}});
    d["valves"]["AV"]["initial"] = "open";
    d["valves"]["AV"]["events"] = json::array({{0.055, "closed"}, {0.165, "open"}});
    d["motion"] = {{"law", "testA"},
                   {"sigma", 0.015},
                   {"w_bar", 4.6e-4},
                   {"amplitude", table_pairs({{0.0, 0.0},
                                              {0.01, -0.1},
                                              {0.04, -0.9},
                                              {0.05, -1.0},
                                              {0.085, -1.0},
                                              {0.095, -0.9},
                                              {0.125, -0.1},
                                              {0.135, 0.0},
                                              {0.17, 0.0},
                                              {0.18, -0.1},
                                              {0.2, -0.6}})}};
    d["ariis"]["p_star"] = {{"unit", "mmHg"},
                            {"table", table_pairs({{0.0, 75.0}, {0.055, 75.0}, {0.08, 0.0}, {0.14, 0.0},
                                                   {0.165, 75.0}, {0.2, 75.0}})}};
    d["output"]["directory"] = "output/testA";
  } else if (name == "testB") {
    const double v0 = std::numbers::pi * 0.01 * 0.01 * 0.06;
    d["boundary"] = {{"inlet", "0 mmHg"}, {"outlet", "80 mmHg"}};
    d["valves"]["MV"]["initial"] = "open";
    d["valves"]["MV"]["events"] = json::array({{0.01, "closed"}, {0.13, "open"}});
    d["valves"]["AV"]["initial"] = "closed";
    d["valves"]["AV"]["events"] = json::array({{0.04, "open"}, {0.10, "closed"}});
    d["motion"] = {
        {"law", "testB"},
        {"length",
         table_pairs({{0.0, 0.06}, {0.045, 0.06}, {0.095, 0.05}, {0.135, 0.05}, {0.195, 0.06}, {0.2, 0.06}})},
        {"volume", table_pairs({{0.0, v0},
                                {0.045, v0},
                                {0.095, 0.7 * v0},
                                {0.135, 0.7 * v0},
                                {0.195, v0},
                                {0.2, v0}})}};
    d["ariis"]["p_star"] = {{"unit", "mmHg"},
                            {"table", table_pairs({{0.0, 0.0}, {0.01, 0.0}, {0.04, 80.0}, {0.10, 80.0},
                                                   {0.13, 0.0}, {0.2, 0.0}})}};
    d["output"]["directory"] = "output/testB";
  } else {
    throw ConfigError("unknown preset '" + name + "' (expected testA or testB)");
  }
  return d;
}

RunConfig preset_test_a() { return parse_config(preset_json("testA")); }
RunConfig preset_test_b() { return parse_config(preset_json("testB")); }

json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path);
  try {
    return json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file " + path + " is not valid JSON: " + e.what());
  }
}

namespace {

void set_path(json& node, const std::vector<std::string>& parts, std::size_t i, const json& value, int& hits,
              const std::string& text) {
  const std::string& key = parts[i];
  const bool last = i + 1 == parts.size();
  if (key == "*") {
    if (!node.is_object() && !node.is_array()) throw ConfigError("override '" + text + "': wildcard on a non-container");
    for (auto& [k, v] : node.items()) {
      (void)k;
      if (last) {
        v = value;
        ++hits;
      } else {
        set_path(v, parts, i + 1, value, hits, text);
      }
    }
    return;
  }
  if (node.is_array()) {
    std::size_t idx = 0;
    try {
      idx = std::stoul(key);
    } catch (const std::exception&) {
      throw ConfigError("override '" + text + "': '" + key + "' is not an array index");
    }
    if (idx >= node.size()) throw ConfigError("override '" + text + "': index out of range");
    if (last) {
      node[idx] = value;
      ++hits;
    } else {
      set_path(node[idx], parts, i + 1, value, hits, text);
    }
    return;
  }
  if (!node.is_object()) throw ConfigError("override '" + text + "': path does not exist");
  if (last) {
    node[key] = value;
    ++hits;
    return;
  }
  if (!node.contains(key)) throw ConfigError("override '" + text + "': path does not exist");
  set_path(node[key], parts, i + 1, value, hits, text);
}

}  // namespace

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override must look like path=value: '" + assignment + "'");
  const std::string path = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;
  }
  std::vector<std::string> parts;
  std::stringstream ss(path);
  std::string p;
  while (std::getline(ss, p, '.')) {
    if (p.empty()) throw ConfigError("override '" + assignment + "': empty path component");
    parts.push_back(p);
  }
  int hits = 0;
  set_path(doc, parts, 0, value, hits, assignment);
  if (hits == 0) throw ConfigError("override '" + assignment + "' matched nothing");
  doc["overrides"].push_back(assignment);
}

RunConfig parse_config(const json& doc) {
  Checker ck;
  RunConfig cfg;
  cfg.resolved = doc;
  if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");
  ck.known_keys(doc, "", {"name", "geometry", "mesh", "fluid", "time", "solver", "boundary", "valves", "motion",
                          "ariis", "probe", "output", "overrides"});
  cfg.name = doc.value("name", std::string("run"));
  ProblemSetup& pb = cfg.problem;

  const json& geo = child(doc, "geometry");
  ck.known_keys(geo, "geometry", {"radius", "L_LA", "L_LV", "L_AA"});
  ck.guard("geometry", [&] {
    if (geo.contains("radius")) pb.geometry.radius = parse_quantity(geo["radius"], "m");
    if (geo.contains("L_LA")) pb.geometry.L_LA = parse_quantity(geo["L_LA"], "m");
    if (geo.contains("L_LV")) pb.geometry.L_LV = parse_quantity(geo["L_LV"], "m");
    if (geo.contains("L_AA")) pb.geometry.L_AA = parse_quantity(geo["L_AA"], "m");
    if (!(pb.geometry.radius > 0.0)) ck.fail("geometry.radius", "must be positive");
    if (!(pb.geometry.L_LA >= 0.0 && pb.geometry.L_LV > 0.0 && pb.geometry.L_AA >= 0.0)) {
      ck.fail("geometry", "compartment lengths must be non-negative (L_LV positive)");
    }
  });

  const json& mesh = child(doc, "mesh");
  ck.known_keys(mesh, "mesh", {"generate", "file"});
  ck.guard("mesh", [&] {
    if (mesh.contains("file")) {
      cfg.mesh.file = mesh["file"].get<std::string>();
    } else {
      const json& g = child(mesh, "generate");
      ck.known_keys(g, "mesh.generate", {"h_min", "h_max", "radial_size", "growth", "band_width"});
      cfg.mesh.grading.h_min = parse_quantity(g.value("h_min", json(0.001)), "m");
      cfg.mesh.grading.h_max = parse_quantity(g.value("h_max", json(0.0046)), "m");
      cfg.mesh.grading.radial_size = parse_quantity(g.value("radial_size", json(0.0)), "m");
      cfg.mesh.grading.growth = g.value("growth", 0.3);
      cfg.mesh.band_width = parse_quantity(g.value("band_width", json(0.006)), "m");
      if (!(cfg.mesh.grading.h_min > 0.0 && cfg.mesh.grading.h_max >= cfg.mesh.grading.h_min)) {
        ck.fail("mesh.generate", "requires 0 < h_min <= h_max");
      }
    }
  });

  const json& fluid = child(doc, "fluid");
  ck.known_keys(fluid, "fluid", {"rho", "mu"});
  const json& time = child(doc, "time");
  ck.known_keys(time, "time", {"dt", "T"});
  const json& solver = child(doc, "solver");
  ck.known_keys(solver, "solver", {"rtol", "max_iterations", "restart", "c_inv", "tau_reaction", "grad_div"});
  FluidParams& fp = pb.params;
  ck.guard("fluid", [&] {
    fp.rho = fluid.value("rho", fp.rho);
    fp.mu = fluid.value("mu", fp.mu);
    if (!(fp.rho > 0.0)) ck.fail("fluid.rho", "must be positive");
    if (!(fp.mu > 0.0)) ck.fail("fluid.mu", "must be positive");
  });
  ck.guard("time", [&] {
    if (time.contains("dt")) fp.dt = parse_quantity(time["dt"], "s");
    if (time.contains("T")) fp.T = parse_quantity(time["T"], "s");
    if (!(fp.dt > 0.0)) ck.fail("time.dt", "must be positive");
    if (!(fp.T > 0.0)) ck.fail("time.T", "must be positive");
  });
  ck.guard("solver", [&] {
    fp.krylov.rtol = solver.value("rtol", fp.krylov.rtol);
    fp.krylov.max_iterations = solver.value("max_iterations", fp.krylov.max_iterations);
    fp.krylov.restart = solver.value("restart", fp.krylov.restart);
    fp.c_inv = solver.value("c_inv", fp.c_inv);
    fp.grad_div = solver.value("grad_div", fp.grad_div);
    fp.c_sigma = solver.value("tau_reaction", fp.c_sigma);
    if (!(fp.krylov.rtol > 0.0 && fp.krylov.rtol < 1.0)) ck.fail("solver.rtol", "must be in (0, 1)");
    if (fp.krylov.max_iterations < 1) ck.fail("solver.max_iterations", "must be positive");
    if (fp.krylov.restart < 1) ck.fail("solver.restart", "must be positive");
    if (!(fp.c_inv > 0.0)) ck.fail("solver.c_inv", "must be positive");
    if (!(fp.c_sigma > 0.0)) ck.fail("solver.tau_reaction", "must be positive");
  });
  const double T = fp.T;
  auto check_cover = [&](const PiecewiseLinear& t, const std::string& path) {
    if (!t.covers(0.0, T)) ck.fail(path, "table does not cover [0, T]");
  };

  const json& bnd = child(doc, "boundary");
  ck.known_keys(bnd, "boundary", {"inlet", "outlet"});
  ck.guard("boundary.inlet", [&] {
    if (!bnd.contains("inlet")) throw ConfigError("missing pressure table");
    pb.pressures.inlet = parse_table(bnd["inlet"], "Pa");
    check_cover(pb.pressures.inlet, "boundary.inlet");
  });
  ck.guard("boundary.outlet", [&] {
    if (!bnd.contains("outlet")) throw ConfigError("missing pressure table");
    pb.pressures.outlet = parse_table(bnd["outlet"], "Pa");
    check_cover(pb.pressures.outlet, "boundary.outlet");
  });

  const json& valves = child(doc, "valves");
  if (!valves.is_object()) ck.fail("valves", "expected an object keyed by MV/AV");
  for (const auto& [key, v] : valves.items()) {
    const std::string path = "valves." + key;
    ck.guard(path, [&] {
      ImmersedValve iv;
      if (key == "MV") {
        iv.id = ValveId::MV;
      } else if (key == "AV") {
        iv.id = ValveId::AV;
      } else {
        throw ConfigError("valve name must be MV or AV");
      }
      ck.known_keys(v, path, {"point", "normal", "epsilon", "resistance", "area", "initial", "events"});
      iv.plane_point = parse_vec3(v.at("point"));
      iv.normal = parse_vec3(v.at("normal"));
      iv.half_thickness = parse_quantity(v.at("epsilon"), "m");
      iv.resistance = parse_quantity(v.at("resistance"));
      const json area = v.value("area", json("analytic"));
      iv.area = area.is_string() && area.get<std::string>() == "analytic"
                    ? std::numbers::pi * pb.geometry.radius * pb.geometry.radius
                    : parse_quantity(area);
      iv.schedule.initial = parse_state(v.at("initial"));
      for (const auto& e : v.value("events", json::array())) {
        if (!e.is_array() || e.size() != 2) throw ConfigError("events must be [time, state] pairs");
        iv.schedule.events.push_back({parse_quantity(e[0], "s"), parse_state(e[1])});
      }
      iv.schedule.validate();
      iv.validate();
      if (!(iv.resistance >= 0.0)) throw ConfigError("resistance must be non-negative");
      pb.valves.push_back(iv);
    });
  }
  for (std::size_t i = 1; i < pb.valves.size(); ++i) {
    if (pb.valves[i].id == ValveId::MV && pb.valves[0].id == ValveId::AV) std::swap(pb.valves[0], pb.valves[i]);
  }

  const json& motion = child(doc, "motion");
  ck.guard("motion", [&] {
    const std::string law = motion.value("law", std::string("none"));
    if (law == "none") {
      ck.known_keys(motion, "motion", {"law"});
      pb.law = StaticWall{};
    } else if (law == "testA") {
      ck.known_keys(motion, "motion", {"law", "amplitude", "sigma", "w_bar"});
      RadialPulseLaw l;
      l.amplitude = parse_table(motion.at("amplitude"));
      l.sigma = parse_quantity(motion.value("sigma", json(l.sigma)), "m");
      l.w_bar = parse_quantity(motion.value("w_bar", json(l.w_bar)), "m");
      check_cover(l.amplitude, "motion.amplitude");
      if (!(l.sigma > 0.0)) ck.fail("motion.sigma", "must be positive");
      pb.law = l;
    } else if (law == "testB") {
      ck.known_keys(motion, "motion", {"law", "length", "volume"});
      ShorteningLaw l;
      l.length = parse_table(motion.at("length"), "m");
      l.volume = parse_table(motion.at("volume"));
      check_cover(l.length, "motion.length");
      check_cover(l.volume, "motion.volume");
      for (double v : l.length.values()) {
        if (!(v > 0.0)) ck.fail("motion.length", "L* must be positive");
      }
      for (double v : l.volume.values()) {
        if (!(v > 0.0)) ck.fail("motion.volume", "V* must be positive");
      }
      pb.law = l;
    } else {
      throw ConfigError("unknown law '" + law + "' (expected none, testA or testB)");
    }
  });

  const json& ar = child(doc, "ariis");
  ck.known_keys(ar, "ariis", {"enabled", "p_star", "ext_pressure", "discrete_area"});
  ck.guard("ariis", [&] {
    pb.ariis.enabled = ar.value("enabled", false);
    pb.ariis.discrete_area = ar.value("discrete_area", false);
    const std::string mode = ar.value("ext_pressure", std::string("boundary"));
    if (mode == "boundary") {
      pb.ariis.ext_pressure_mode = ExtPressureMode::BoundaryValues;
    } else if (mode == "compartment") {
      pb.ariis.ext_pressure_mode = ExtPressureMode::CompartmentAverage;
    } else {
      ck.fail("ariis.ext_pressure", "must be 'boundary' or 'compartment'");
    }
    if (ar.contains("p_star")) {
      pb.ariis.p_star = parse_table(ar["p_star"], "Pa");
      check_cover(pb.ariis.p_star, "ariis.p_star");
    } else if (pb.ariis.enabled) {
      ck.fail("ariis.p_star", "required when ariis.enabled");
    }
  });

  const json& probe = child(doc, "probe");
  ck.known_keys(probe, "probe", {"radius"});
  ck.guard("probe", [&] { cfg.probe_radius = parse_quantity(probe.value("radius", json(0.0)), "m"); });

  const json& out = child(doc, "output");
  ck.known_keys(out, "output", {"directory", "csv", "snapshot_stride", "binary"});
  ck.guard("output", [&] {
    cfg.output.directory = out.value("directory", cfg.output.directory);
    cfg.output.csv = out.value("csv", cfg.output.csv);
    cfg.output.snapshot_stride = out.value("snapshot_stride", 0);
    cfg.output.binary = out.value("binary", true);
    if (cfg.output.snapshot_stride < 0) ck.fail("output.snapshot_stride", "must be non-negative");
  });

  ck.finish();
  return cfg;
}

TetMesh build_mesh(const RunConfig& config) {
  if (!config.mesh.file.empty()) return import_mesh(config.mesh.file);
  CylinderGrading g = config.mesh.grading;
  if (g.bands.empty()) {
    for (const auto& v : config.problem.valves) g.bands.push_back({v.plane_point.z, config.mesh.band_width});
  }
  return generate_cylinder_mesh(config.problem.geometry.radius, config.problem.geometry.total_length(), g);
}

}  // namespace ariis
