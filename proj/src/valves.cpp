#include "ariis/valves.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "ariis/error.hpp"
#include "ariis/log.hpp"
#include "ariis/quadrature.hpp"

namespace ariis {

std::string to_string(ValveId id) { return id == ValveId::MV ? "MV" : "AV"; }
std::string to_string(ValveState state) { return state == ValveState::Open ? "open" : "closed"; }

void ValveSchedule::validate() const {
  ValveState prev = initial;
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (i > 0 && !(events[i].time > events[i - 1].time)) throw ConfigError("valve event times must increase strictly");
    if (events[i].state == prev) throw ConfigError("valve events must alternate between open and closed");
    prev = events[i].state;
  }
}

void ImmersedValve::validate() const {
  const std::string name = to_string(id);
  if (std::abs(norm(normal) - 1.0) > 1e-12) throw ConfigError(name + ": normal must be a unit vector");
  if (!(half_thickness > 0.0)) throw ConfigError(name + ": half-thickness must be positive");
  if (!(area > 0.0)) throw ConfigError(name + ": area must be positive");
  if (!(resistance >= 0.0)) throw ConfigError(name + ": resistance must be non-negative");
  schedule.validate();
}

double signed_distance(const ImmersedValve& valve, const Vec3& x) { return dot(x - valve.plane_point, valve.normal); }

double smoothed_delta(double phi, double eps) {
  if (std::abs(phi) > eps) return 0.0;
  return (1.0 + std::cos(std::numbers::pi * phi / eps)) / (2.0 * eps);
}

ValveState valve_state(const ImmersedValve& valve, double t) {
  // Step times are accumulated as n * dt; absorb the rounding.
  constexpr double slack = 1e-10;
  ValveState state = valve.schedule.initial;
  for (const auto& e : valve.schedule.events) {
    if (e.time <= t + slack) state = e.state;
  }
  return state;
}

int chi_iso(std::span<const ImmersedValve> valves, double t) {
  if (valves.empty()) return 0;
  return std::all_of(valves.begin(), valves.end(),
                     [t](const ImmersedValve& v) { return valve_state(v, t) == ValveState::Closed; })
             ? 1
             : 0;
}

bool cell_intersects_band(const ImmersedValve& valve, const std::array<Vec3, 4>& x) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& p : x) {
    const double phi = signed_distance(valve, p);
    lo = std::min(lo, phi);
    hi = std::max(hi, phi);
  }
  return hi > -valve.half_thickness && lo < valve.half_thickness;
}

double discrete_band_mass(const ImmersedValve& valve, const TetMesh& mesh, int quadrature_degree) {
  const auto rule = tet_quadrature(quadrature_degree);
  double mass = 0.0;
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto x = mesh.cell_coordinates(c);
    if (!cell_intersects_band(valve, x)) continue;
    const double vol = signed_tet_volume(x[0], x[1], x[2], x[3]);
    for (const auto& q : rule) {
      const Vec3 p = q.bary[0] * x[0] + q.bary[1] * x[1] + q.bary[2] * x[2] + q.bary[3] * x[3];
      mass += q.weight * vol * smoothed_delta(signed_distance(valve, p), valve.half_thickness);
    }
  }
  const auto verts = mesh.vertices();
  for (const auto& f : mesh.boundary_faces()) {
    if (f.tag == BoundaryTag::Wall) continue;
    for (int v : f.vertices) {
      if (std::abs(signed_distance(valve, verts[v])) < valve.half_thickness) {
        warn(to_string(valve.id) + " band is clipped by the " + to_string(f.tag) + " boundary");
        return mass;
      }
    }
  }
  return mass;
}

double band_resolution_ratio(const ImmersedValve& valve, const TetMesh& mesh) {
  const auto diam = cell_diameters(mesh);
  double h_min = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    if (cell_intersects_band(valve, mesh.cell_coordinates(c))) h_min = std::min(h_min, diam.diameters[c]);
  }
  if (!std::isfinite(h_min)) return std::numeric_limits<double>::infinity();
  const double ratio = valve.half_thickness / h_min;
  if (ratio < 1.5) {
    std::ostringstream msg;
    msg << to_string(valve.id) << ": eps / h_min = " << ratio << " is below 1.5";
    warn(msg.str());
  }
  return ratio;
}

ImmersedValve translated(const ImmersedValve& valve, const Vec3& shift) {
  ImmersedValve out = valve;
  out.plane_point += shift;
  return out;
}

const ImmersedValve& find_valve(std::span<const ImmersedValve> valves, ValveId id) {
  for (const auto& v : valves) {
    if (v.id == id) return v;
  }
  throw ConfigError("valve " + to_string(id) + " is not defined");
}

}  // namespace ariis
