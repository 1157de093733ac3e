#pragma once

#include <array>
#include <span>
#include <vector>

#include "ariis/ale.hpp"
#include "ariis/assembly.hpp"
#include "ariis/krylov.hpp"
#include "ariis/mesh.hpp"
#include "ariis/table.hpp"
#include "ariis/valves.hpp"

namespace ariis {

struct FluidParams {
  double rho = 1.06e3;   ///< kg/m^3
  double mu = 3.5e-3;    ///< kg/(m s)
  double dt = 1e-3;      ///< s
  double T = 0.2;        ///< s
  double c_inv = 36.0;   ///< inverse-estimate constant in tau
  double c_sigma = 4.0;  ///< weight of the band reaction in tau
  bool grad_div = true;  ///< least-squares incompressibility stabilisation
  KrylovOptions krylov;

  void validate() const;
};

/// Nodal fields at one time level.
struct FluidState {
  std::vector<Vec3> u;      ///< m/s
  std::vector<double> p;    ///< Pa
  std::vector<Vec3> d;      ///< displacement from the reference mesh, m
  std::vector<Vec3> u_ale;  ///< mesh velocity, m/s
  double t = 0.0;

  static FluidState zero(std::size_t num_vertices, double t = 0.0);
};

enum class ExtPressureMode { BoundaryValues, CompartmentAverage };

struct AriisConfig {
  bool enabled = false;
  PiecewiseLinear p_star;  ///< Pa
  ExtPressureMode ext_pressure_mode = ExtPressureMode::BoundaryValues;
  /// Use the quadrature value of the band mass instead of the valve area.
  bool discrete_area = false;
};

/// Neumann pressure tables on inlet and outlet (Pa). The wall is always a
/// Dirichlet boundary with the mesh velocity.
struct BoundaryPressures {
  PiecewiseLinear inlet{0.0};
  PiecewiseLinear outlet{0.0};
};

struct ProblemSetup {
  Compartments geometry;
  DisplacementLaw law = StaticWall{};
  std::vector<ImmersedValve> valves;  ///< reference positions
  BoundaryPressures pressures;
  AriisConfig ariis;
  FluidParams params;
};

/// Integral of (R/eps) delta(phi) (u - u_ale).n over the band of `valve`,
/// on the current coordinates of `mesh`.
double resistive_integral(const TetMesh& mesh, std::span<const Vec3> u, std::span<const Vec3> u_ale,
                          const ImmersedValve& valve);

/// C_k = p* - p_ext,k - sum_j RI_j / area_sum.
double correction_coefficient(double p_star, double p_ext, std::span<const double> resistive_integrals,
                              double area_sum);

/// Same, evaluating the resistive integrals of all `valves` from (u, u_ale).
double correction_coefficient(std::span<const ImmersedValve> valves, const TetMesh& mesh, std::span<const Vec3> u,
                              std::span<const Vec3> u_ale, double p_star, double p_ext);

/// What happened during one accepted step.
struct StepRecord {
  double t = 0.0;
  int chi_iso = 0;
  std::array<ValveState, 2> states{ValveState::Open, ValveState::Open};  ///< MV, AV
  std::array<double, 2> coefficient{0.0, 0.0};                           ///< applied C_k (Pa)
  std::array<double, 2> resistive{0.0, 0.0};  ///< RI_k of the previous state (Pa m^2)
  std::array<double, 2> p_ext{0.0, 0.0};
  double p_star = 0.0;
  KrylovResult linear;
};

/// Backward-Euler ALE time stepper for the valve benchmark problems.
class FlowSolver {
 public:
  FlowSolver(TetMesh mesh, ProblemSetup setup);

  const TetMesh& mesh() const { return mesh_; }
  const FluidState& state() const { return state_; }
  const ProblemSetup& setup() const { return setup_; }
  const SystemAssembler& assembler() const { return assembler_; }

  /// Valve planes moved with the prescribed motion at time t.
  std::vector<ImmersedValve> valves_at(double t) const;
  /// Valve area used in C_k (analytic or band mass on the current mesh).
  double valve_area(const ImmersedValve& valve) const;

  /// Advances the state by one time step.
  StepRecord step();

  /// Builds the linear system of the next step without solving it.
  /// Exposed for verification; does not change the solver state.
  LinearSystem build_system(bool ariis_enabled, bool serial = false);

 private:
  struct Prepared {
    std::vector<Vec3> d;
    std::vector<Vec3> u_ale;
    std::vector<ActiveValve> active;
    StepRecord record;
  };
  Prepared prepare(double t_next, bool ariis_enabled);
  AssemblyInput make_input(const Prepared& prep) const;

  TetMesh mesh_;
  ProblemSetup setup_;
  LiftingSolver lifting_;
  SystemAssembler assembler_;
  std::vector<char> wall_;
  std::vector<char> boundary_;
  FluidState state_;
  LinearSystem system_;
  int step_index_ = 0;
};

}  // namespace ariis
