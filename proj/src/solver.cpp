#include "ariis/solver.hpp"

#include <cmath>
#include <sstream>

#include "ariis/diagnostics.hpp"
#include "ariis/error.hpp"
#include "ariis/quadrature.hpp"

namespace ariis {

void FluidParams::validate() const {
  if (!(rho > 0.0)) throw ConfigError("fluid.rho must be positive");
  if (!(mu > 0.0)) throw ConfigError("fluid.mu must be positive");
  if (!(dt > 0.0)) throw ConfigError("time.dt must be positive");
  if (!(T > 0.0)) throw ConfigError("time.T must be positive");
}

FluidState FluidState::zero(std::size_t num_vertices, double t) {
  FluidState s;
  s.u.assign(num_vertices, Vec3{});
  s.p.assign(num_vertices, 0.0);
  s.d.assign(num_vertices, Vec3{});
  s.u_ale.assign(num_vertices, Vec3{});
  s.t = t;
  return s;
}

double resistive_integral(const TetMesh& mesh, std::span<const Vec3> u, std::span<const Vec3> u_ale,
                          const ImmersedValve& valve) {
  const auto rule = tet_quadrature(5);
  const double scale = valve.resistance / valve.half_thickness;
  double sum = 0.0;
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto x = mesh.cell_coordinates(c);
    if (!cell_intersects_band(valve, x)) continue;
    const Cell& v = mesh.cells()[c];
    const double vol = mesh.cell_volume(c);
    for (const auto& q : rule) {
      Vec3 xq{}, rel{};
      for (int a = 0; a < 4; ++a) {
        xq += q.bary[a] * x[a];
        rel += q.bary[a] * (u[v[a]] - u_ale[v[a]]);
      }
      const double d = smoothed_delta(signed_distance(valve, xq), valve.half_thickness);
      sum += q.weight * vol * d * dot(rel, valve.normal);
    }
  }
  return scale * sum;
}

double correction_coefficient(double p_star, double p_ext, std::span<const double> resistive_integrals,
                              double area_sum) {
  if (!(area_sum > 0.0)) throw SolverError("valve area sum must be positive");
  double ri = 0.0;
  for (double r : resistive_integrals) ri += r;
  return p_star - p_ext - ri / area_sum;
}

double correction_coefficient(std::span<const ImmersedValve> valves, const TetMesh& mesh, std::span<const Vec3> u,
                              std::span<const Vec3> u_ale, double p_star, double p_ext) {
  std::vector<double> ri;
  double area = 0.0;
  for (const auto& v : valves) {
    ri.push_back(resistive_integral(mesh, u, u_ale, v));
    area += v.area;
  }
  return correction_coefficient(p_star, p_ext, ri, area);
}

// ---------------------------------------------------------------------------

FlowSolver::FlowSolver(TetMesh mesh, ProblemSetup setup)
    : mesh_(std::move(mesh)), setup_(std::move(setup)), lifting_(mesh_), assembler_(mesh_) {
  setup_.params.validate();
  for (const auto& v : setup_.valves) v.validate();
  if (setup_.ariis.enabled && setup_.ariis.p_star.empty()) throw ConfigError("ariis.p_star is required");
  wall_ = mesh_.tagged_vertex_mask(BoundaryTag::Wall);
  boundary_ = mesh_.boundary_vertex_mask();
  state_ = FluidState::zero(mesh_.num_vertices(), 0.0);

  std::vector<Vec3> g(mesh_.num_vertices());
  const auto ref = mesh_.reference_vertices();
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (boundary_[i]) g[i] = boundary_displacement(setup_.law, ref[i], 0.0, setup_.geometry);
  }
  state_.d = lifting_.solve(g);
  move_mesh(mesh_, state_.d);
}

std::vector<ImmersedValve> FlowSolver::valves_at(double t) const {
  std::vector<ImmersedValve> out;
  out.reserve(setup_.valves.size());
  for (const auto& v : setup_.valves) {
    const Vec3 d = boundary_displacement(setup_.law, v.plane_point, t, setup_.geometry);
    out.push_back(translated(v, dot(d, v.normal) * v.normal));
  }
  return out;
}

double FlowSolver::valve_area(const ImmersedValve& valve) const {
  return setup_.ariis.discrete_area ? discrete_band_mass(valve, mesh_) : valve.area;
}

FlowSolver::Prepared FlowSolver::prepare(double t_next, bool ariis_enabled) {
  Prepared prep;
  StepRecord& rec = prep.record;
  rec.t = t_next;
  const auto& valves = setup_.valves;
  rec.chi_iso = chi_iso(valves, t_next);

  // Explicit quantities from the previous state on the previous geometry.
  const auto prev_valves = valves_at(state_.t);
  for (std::size_t k = 0; k < prev_valves.size(); ++k) {
    const int slot = prev_valves[k].id == ValveId::MV ? 0 : 1;
    rec.states[slot] = valve_state(valves[k], t_next);
    if (rec.states[slot] == ValveState::Closed) {
      rec.resistive[slot] = resistive_integral(mesh_, state_.u, state_.u_ale, prev_valves[k]);
    }
  }
  if (setup_.ariis.ext_pressure_mode == ExtPressureMode::CompartmentAverage) {
    rec.p_ext[0] = compartment_pressure(mesh_, state_.p, prev_valves, state_.t, CompartmentSpec{CompartmentId::LA, {}, std::nullopt});
    rec.p_ext[1] = compartment_pressure(mesh_, state_.p, prev_valves, state_.t, CompartmentSpec{CompartmentId::AA, {}, std::nullopt});
  } else {
    rec.p_ext[0] = setup_.pressures.inlet(t_next);
    rec.p_ext[1] = setup_.pressures.outlet(t_next);
  }
  if (ariis_enabled) {
    if (setup_.ariis.p_star.empty()) {
      std::ostringstream msg;
      msg << "missing p* value at t = " << t_next;
      throw SolverError(msg.str());
    }
    rec.p_star = setup_.ariis.p_star(t_next);
  }

  // Mesh motion.
  const auto ref = mesh_.reference_vertices();
  std::vector<Vec3> g(mesh_.num_vertices());
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (boundary_[i]) g[i] = boundary_displacement(setup_.law, ref[i], t_next, setup_.geometry);
  }
  prep.d = lifting_.solve(g);
  prep.u_ale = ale_velocity(prep.d, state_.d, setup_.params.dt);
  try {
    move_mesh(mesh_, prep.d);
  } catch (const MeshError& e) {
    std::ostringstream msg;
    msg << "mesh entanglement at t = " << t_next << ": " << e.what();
    throw SolverError(msg.str());
  }

  const auto next_valves = valves_at(t_next);
  double area_sum = 0.0;
  for (const auto& v : next_valves) area_sum += valve_area(v);
  for (std::size_t k = 0; k < next_valves.size(); ++k) {
    const int slot = next_valves[k].id == ValveId::MV ? 0 : 1;
    if (rec.states[slot] != ValveState::Closed) continue;
    double coeff = 0.0;
    if (ariis_enabled && rec.chi_iso == 1) {
      coeff = correction_coefficient(rec.p_star, rec.p_ext[slot], rec.resistive, area_sum);
    }
    rec.coefficient[slot] = coeff;
    prep.active.push_back(ActiveValve{next_valves[k], coeff});
  }
  return prep;
}

AssemblyInput FlowSolver::make_input(const Prepared& prep) const {
  AssemblyInput in;
  in.u_prev = state_.u;
  in.u_ale = prep.u_ale;
  in.valves = prep.active;
  in.p_inlet = setup_.pressures.inlet(prep.record.t);
  in.p_outlet = setup_.pressures.outlet(prep.record.t);
  in.rho = setup_.params.rho;
  in.mu = setup_.params.mu;
  in.dt = setup_.params.dt;
  in.c_inv = setup_.params.c_inv;
  in.grad_div = setup_.params.grad_div;
  in.c_sigma = setup_.params.c_sigma;
  in.dirichlet = wall_;
  in.dirichlet_values = prep.u_ale;
  return in;
}

LinearSystem FlowSolver::build_system(bool ariis_enabled, bool serial) {
  const std::vector<Vec3> saved(mesh_.vertices().begin(), mesh_.vertices().end());
  const double t_next = static_cast<double>(step_index_ + 1) * setup_.params.dt;
  const Prepared prep = prepare(t_next, ariis_enabled);
  LinearSystem sys;
  if (serial) {
    assembler_.assemble_serial(mesh_, make_input(prep), sys);
  } else {
    assembler_.assemble(mesh_, make_input(prep), sys);
  }
  mesh_.set_current_vertices(saved);
  return sys;
}

StepRecord FlowSolver::step() {
  const double t_next = static_cast<double>(step_index_ + 1) * setup_.params.dt;
  Prepared prep = prepare(t_next, setup_.ariis.enabled);
  assembler_.assemble(mesh_, make_input(prep), system_);

  const std::size_t nv = mesh_.num_vertices();
  std::vector<double> x0(4 * nv);
  for (std::size_t i = 0; i < nv; ++i) {
    for (int k = 0; k < 3; ++k) x0[4 * i + k] = state_.u[i][k];
    x0[4 * i + 3] = state_.p[i];
  }
  std::vector<double> x;
  try {
    x = solve_linear(system_.A, system_.b, setup_.params.krylov, x0, &prep.record.linear);
  } catch (const SolverError& e) {
    std::ostringstream msg;
    msg << "step " << step_index_ + 1 << " (t = " << t_next << "): " << e.what();
    throw SolverError(msg.str());
  }

  FluidState next;
  next.u.resize(nv);
  next.p.resize(nv);
  for (std::size_t i = 0; i < nv; ++i) {
    next.u[i] = {x[4 * i], x[4 * i + 1], x[4 * i + 2]};
    next.p[i] = x[4 * i + 3];
    if (!std::isfinite(next.p[i]) || !std::isfinite(norm(next.u[i]))) {
      std::ostringstream msg;
      msg << "step " << step_index_ + 1 << " (t = " << t_next << "): non-finite solution";
      throw SolverError(msg.str());
    }
  }
  next.d = std::move(prep.d);
  next.u_ale = std::move(prep.u_ale);
  next.t = t_next;
  state_ = std::move(next);
  ++step_index_;
  return prep.record;
}

}  // namespace ariis
