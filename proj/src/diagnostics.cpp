#include "ariis/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <sstream>

#include "ariis/error.hpp"
#include "ariis/mesh_io.hpp"
#include "ariis/solver.hpp"

namespace ariis {

namespace {

const ImmersedValve* lookup(std::span<const ImmersedValve> valves, ValveId id) {
  for (const auto& v : valves) {
    if (v.id == id) return &v;
  }
  return nullptr;
}

bool in_compartment(std::span<const ImmersedValve> valves, CompartmentId id, const Vec3& x) {
  const ImmersedValve* mv = lookup(valves, ValveId::MV);
  const ImmersedValve* av = lookup(valves, ValveId::AV);
  switch (id) {
    case CompartmentId::LA:
      return mv && signed_distance(*mv, x) >= 0.0;
    case CompartmentId::AA:
      return av && signed_distance(*av, x) >= 0.0;
    case CompartmentId::LV:
      return (!mv || signed_distance(*mv, x) < 0.0) && (!av || signed_distance(*av, x) < 0.0);
  }
  return false;
}

// Cells of spec that survive the closed-band exclusion.
std::vector<int> averaging_cells(const TetMesh& mesh, std::span<const ImmersedValve> valves, double t,
                                 const CompartmentSpec& spec) {
  std::vector<int> out;
  for (int c : compartment_cells(mesh, valves, spec)) {
    const auto x = mesh.cell_coordinates(c);
    bool excluded = false;
    for (const auto& v : valves) {
      if (valve_state(v, t) == ValveState::Closed && cell_intersects_band(v, x)) {
        excluded = true;
        break;
      }
    }
    if (!excluded) out.push_back(c);
  }
  if (out.empty()) throw SolverError("empty averaging region");
  return out;
}

}  // namespace

std::vector<int> compartment_cells(const TetMesh& mesh, std::span<const ImmersedValve> valves,
                                   const CompartmentSpec& spec) {
  std::vector<int> out;
  auto keep = [&](int c) {
    if (!spec.control) return true;
    return norm(mesh.cell_centroid(c) - spec.control->center) <= spec.control->radius;
  };
  if (!spec.cells.empty()) {
    for (int c : spec.cells) {
      if (keep(c)) out.push_back(c);
    }
    return out;
  }
  for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
    if (in_compartment(valves, spec.id, mesh.cell_centroid(c)) && keep(c)) out.push_back(c);
  }
  return out;
}

double compartment_pressure(const TetMesh& mesh, std::span<const double> p, std::span<const ImmersedValve> valves,
                            double t, const CompartmentSpec& spec) {
  double num = 0.0, vol = 0.0;
  for (int c : averaging_cells(mesh, valves, t, spec)) {
    const auto& v = mesh.cells()[c];
    const double w = mesh.cell_volume(c);
    num += w * 0.25 * (p[v[0]] + p[v[1]] + p[v[2]] + p[v[3]]);
    vol += w;
  }
  return num / vol;
}

double compartment_speed(const TetMesh& mesh, std::span<const Vec3> u, std::span<const ImmersedValve> valves,
                         double t, const CompartmentSpec& spec) {
  double num = 0.0, vol = 0.0;
  for (int c : averaging_cells(mesh, valves, t, spec)) {
    const auto& v = mesh.cells()[c];
    const double w = mesh.cell_volume(c);
    num += w * norm(0.25 * (u[v[0]] + u[v[1]] + u[v[2]] + u[v[3]]));
    vol += w;
  }
  return num / vol;
}

double ventricular_volume(const TetMesh& mesh, std::span<const ImmersedValve> valves) {
  double vol = 0.0;
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    if (in_compartment(valves, CompartmentId::LV, mesh.cell_centroid(c))) vol += mesh.cell_volume(c);
  }
  return vol;
}

ControlSphere default_lv_probe(const ImmersedValve& mv, double radius_c) {
  const Vec3 axis_point{0.0, 0.0, mv.plane_point.z};
  return {axis_point - (2.0 * mv.half_thickness) * mv.normal, 0.25 * radius_c};
}

double pressure_estimate(const TetMesh& mesh, std::span<const Vec3> u, std::span<const Vec3> u_ale,
                         std::span<const ImmersedValve> valves, double t, double p_LA, double p_AA,
                         std::span<const double> coefficients) {
  if (!coefficients.empty() && coefficients.size() != valves.size()) {
    throw SolverError("one coefficient per valve expected");
  }
  double num = 0.0, area = 0.0;
  for (std::size_t k = 0; k < valves.size(); ++k) {
    const auto& v = valves[k];
    if (!coefficients.empty()) num += v.area * coefficients[k];
    if (valve_state(v, t) != ValveState::Closed) throw SolverError("estimate undefined outside isovolumetric phase");
    const double p_ext = v.id == ValveId::MV ? p_LA : p_AA;
    num += v.area * p_ext + resistive_integral(mesh, u, u_ale, v);
    area += v.area;
  }
  if (!(area > 0.0)) throw SolverError("estimate undefined outside isovolumetric phase");
  return num / area;
}

double relative_pressure_error(std::span<const double> p_lv, std::span<const double> p_star,
                               std::span<const int> chi_iso) {
  if (p_lv.size() != p_star.size() || p_lv.size() != chi_iso.size()) {
    throw SolverError("pressure series are not aligned");
  }
  double num = 0.0, den = 0.0;
  bool any = false;
  for (std::size_t i = 0; i < p_lv.size(); ++i) {
    if (chi_iso[i] != 1) continue;
    any = true;
    num = std::max(num, std::abs(p_lv[i] - p_star[i]));
    den = std::max(den, std::abs(p_star[i]));
  }
  if (!any) throw SolverError("empty isovolumetric window");
  if (den == 0.0) throw SolverError("reference pressure vanishes on the isovolumetric window");
  return num / den;
}

double valve_flux(const TetMesh& mesh, std::span<const Vec3> u, std::span<const Vec3> u_ale,
                  const ImmersedValve& valve) {
  const Vec3 n = valve.normal;
  // In-plane basis for ordering quadrilateral sections.
  const Vec3 helper = std::abs(n.x) < 0.9 ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 1.0, 0.0};
  Vec3 t1 = cross(n, helper);
  t1 *= 1.0 / norm(t1);
  const Vec3 t2 = cross(n, t1);

  double flux = 0.0;
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto x = mesh.cell_coordinates(c);
    const Cell& v = mesh.cells()[c];
    double phi[4];
    bool plus[4];
    int np = 0;
    for (int a = 0; a < 4; ++a) {
      phi[a] = signed_distance(valve, x[a]);
      plus[a] = phi[a] >= 0.0;
      np += plus[a];
    }
    if (np == 0 || np == 4) continue;
    std::array<Vec3, 4> pts;
    std::array<double, 4> val;
    int m = 0;
    for (int a = 0; a < 4; ++a) {
      for (int b = a + 1; b < 4; ++b) {
        if (plus[a] == plus[b]) continue;
        const double s = phi[a] / (phi[a] - phi[b]);
        pts[m] = x[a] + s * (x[b] - x[a]);
        const Vec3 ra = u[v[a]] - u_ale[v[a]];
        const Vec3 rb = u[v[b]] - u_ale[v[b]];
        val[m] = dot(ra + s * (rb - ra), n);
        ++m;
      }
    }
    if (m == 4) {
      Vec3 ctr = 0.25 * (pts[0] + pts[1] + pts[2] + pts[3]);
      std::array<int, 4> order{0, 1, 2, 3};
      std::array<double, 4> ang;
      for (int k = 0; k < 4; ++k) ang[k] = std::atan2(dot(pts[k] - ctr, t2), dot(pts[k] - ctr, t1));
      std::sort(order.begin(), order.end(), [&](int i, int j) { return ang[i] < ang[j]; });
      const auto pc = pts;
      const auto vc = val;
      for (int k = 0; k < 4; ++k) {
        pts[k] = pc[order[k]];
        val[k] = vc[order[k]];
      }
    }
    for (int k = 1; k + 1 < m; ++k) {
      const double area = 0.5 * norm(cross(pts[k] - pts[0], pts[k + 1] - pts[0]));
      flux += area * (val[0] + val[k] + val[k + 1]) / 3.0;
    }
  }
  return flux;
}

// --- time series -----------------------------------------------------------

namespace {

struct Column {
  const char* name;
  std::function<double(const LogRecord&)> get;
  std::function<void(LogRecord&, double)> set;
};

#define ARIIS_DCOL(field) \
  Column { #field, [](const LogRecord& r) { return static_cast<double>(r.field); }, [](LogRecord& r, double v) { r.field = v; } }
#define ARIIS_ICOL(field)                                                          \
  Column {                                                                         \
#field, [](const LogRecord& r) { return static_cast<double>(r.field); },       \
        [](LogRecord& r, double v) { r.field = static_cast<int>(v); }              \
  }

const std::vector<Column>& columns() {
  static const std::vector<Column> cols = {
      ARIIS_DCOL(t),     ARIIS_DCOL(p_LA),       ARIIS_DCOL(p_LV),      ARIIS_DCOL(p_LV_mean),
      ARIIS_DCOL(p_AA),  ARIIS_DCOL(p_star),     ARIIS_ICOL(chi_iso),   ARIIS_ICOL(mv_closed),
      ARIIS_ICOL(av_closed), ARIIS_DCOL(C_MV),   ARIIS_DCOL(C_AV),      ARIIS_DCOL(RI_MV),
      ARIIS_DCOL(RI_AV), ARIIS_DCOL(p_estimate), ARIIS_DCOL(V_LV),      ARIIS_DCOL(Q_MV),
      ARIIS_DCOL(Q_AV),  ARIIS_DCOL(u_cv),       ARIIS_ICOL(iterations), ARIIS_DCOL(residual),
  };
  return cols;
}

#undef ARIIS_DCOL
#undef ARIIS_ICOL

bool is_int_column(const std::string& name) {
  return name == "chi_iso" || name == "mv_closed" || name == "av_closed" || name == "iterations";
}

}  // namespace

void TimeSeriesLog::append(const LogRecord& r) {
  if (!records_.empty() && !(r.t > records_.back().t)) throw SolverError("log times must increase strictly");
  records_.push_back(r);
}

const std::vector<std::string>& TimeSeriesLog::header() {
  static const std::vector<std::string> h = [] {
    std::vector<std::string> out;
    for (const auto& c : columns()) out.emplace_back(c.name);
    return out;
  }();
  return h;
}

std::vector<double> TimeSeriesLog::column(const std::string& name) const {
  for (const auto& c : columns()) {
    if (name == c.name) {
      std::vector<double> out;
      out.reserve(records_.size());
      for (const auto& r : records_) out.push_back(c.get(r));
      return out;
    }
  }
  throw ConfigError("unknown log column '" + name + "'");
}

void export_csv(const TimeSeriesLog& log, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  const auto& cols = columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i].name;
  out << '\n' << std::setprecision(17);
  for (const auto& r : log.records()) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (i) out << ',';
      if (is_int_column(cols[i].name)) {
        out << static_cast<long long>(cols[i].get(r));
      } else {
        out << cols[i].get(r);
      }
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

TimeSeriesLog read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("empty log file " + path);
  std::vector<std::string> names;
  {
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) names.push_back(tok);
  }
  if (names != TimeSeriesLog::header()) throw ConfigError("log schema mismatch in " + path);
  const auto& cols = columns();
  TimeSeriesLog log;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string tok;
    LogRecord r;
    std::size_t i = 0;
    while (std::getline(ss, tok, ',')) {
      if (i >= cols.size()) throw ConfigError("too many fields on line " + std::to_string(lineno));
      char* end = nullptr;
      const double v = std::strtod(tok.c_str(), &end);
      if (end == tok.c_str()) throw ConfigError("bad number on line " + std::to_string(lineno));
      cols[i++].set(r, v);
    }
    if (i != cols.size()) throw ConfigError("missing fields on line " + std::to_string(lineno));
    log.append(r);
  }
  return log;
}

void export_vtu(const TetMesh& mesh, const SnapshotFields& fields, std::span<const ImmersedValve> valves, double t,
                const std::string& path, bool binary) {
  const std::size_t nv = mesh.num_vertices();
  auto flat = [nv](std::span<const Vec3> f) {
    std::vector<double> out(3 * nv, 0.0);
    for (std::size_t i = 0; i < std::min(nv, f.size()); ++i) {
      out[3 * i] = f[i].x;
      out[3 * i + 1] = f[i].y;
      out[3 * i + 2] = f[i].z;
    }
    return out;
  };
  const auto u = flat(fields.u);
  const auto d = flat(fields.d);
  const auto w = flat(fields.u_ale);
  std::vector<double> p(fields.p.begin(), fields.p.end());
  p.resize(nv, 0.0);
  std::vector<double> band(mesh.num_cells(), 0.0), comp(mesh.num_cells(), 0.0);
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto x = mesh.cell_coordinates(c);
    for (const auto& v : valves) {
      if (valve_state(v, t) == ValveState::Closed && cell_intersects_band(v, x)) band[c] = 1.0;
    }
    const Vec3 xc = mesh.cell_centroid(c);
    comp[c] = in_compartment(valves, CompartmentId::LA, xc) ? 0.0 : in_compartment(valves, CompartmentId::AA, xc) ? 2.0 : 1.0;
  }
  const std::array<VtuField, 4> pf{VtuField{"velocity", 3, u}, VtuField{"pressure", 1, p},
                                   VtuField{"displacement", 3, d}, VtuField{"ale_velocity", 3, w}};
  const std::array<VtuField, 2> cf{VtuField{"valve_band", 1, band}, VtuField{"compartment", 1, comp}};
  write_vtu(path, mesh, pf, cf, binary ? VtuFormat::Binary : VtuFormat::Ascii, false, t);
}

}  // namespace ariis
