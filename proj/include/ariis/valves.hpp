#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ariis/geometry.hpp"
#include "ariis/mesh.hpp"

namespace ariis {

enum class ValveId { MV, AV };
enum class ValveState { Open, Closed };

std::string to_string(ValveId id);
std::string to_string(ValveState state);

/// Prescribed open/closed history of one valve.
struct ValveSchedule {
  struct Event {
    double time;
    ValveState state;
  };
  ValveState initial = ValveState::Closed;
  std::vector<Event> events;

  /// Throws ConfigError unless event times increase strictly and states alternate.
  void validate() const;
};

/// Planar resistive immersed surface. `normal` points out of the ventricular
/// compartment; `area` is the valve section |Gamma_k|.
struct ImmersedValve {
  ValveId id = ValveId::MV;
  Vec3 plane_point;
  Vec3 normal{0.0, 0.0, 1.0};
  double half_thickness = 0.0;
  double resistance = 0.0;
  double area = 0.0;
  ValveSchedule schedule;

  /// Throws ConfigError if |n| != 1, eps <= 0 or area <= 0.
  void validate() const;
};

/// (x - plane_point) . n, positive on the side n points to.
double signed_distance(const ImmersedValve& valve, const Vec3& x);

/// Cosine bump (1 + cos(pi phi / eps)) / (2 eps) on |phi| <= eps, zero outside.
double smoothed_delta(double phi, double eps);

/// State after the last event with time <= t (events take effect at their step).
ValveState valve_state(const ImmersedValve& valve, double t);

/// 1 iff every valve is Closed at t (and at least one valve exists).
int chi_iso(std::span<const ImmersedValve> valves, double t);

/// True if the cell's (current) vertices span an interval intersecting (-eps, eps).
bool cell_intersects_band(const ImmersedValve& valve, const std::array<Vec3, 4>& x);

/// Mesh quadrature of the integral of delta_k(phi_k) over the domain, using the
/// current coordinates. Warns if the band touches an inlet or outlet face.
double discrete_band_mass(const ImmersedValve& valve, const TetMesh& mesh, int quadrature_degree = 5);

/// eps / h_min over cells intersecting the band; warns below 1.5.
double band_resolution_ratio(const ImmersedValve& valve, const TetMesh& mesh);

/// Copy of the valve with its plane translated by `shift`.
ImmersedValve translated(const ImmersedValve& valve, const Vec3& shift);

/// Finds the valve with the given id; throws ConfigError if missing.
const ImmersedValve& find_valve(std::span<const ImmersedValve> valves, ValveId id);

}  // namespace ariis
