#pragma once

#include <span>
#include <vector>

#include "ariis/mesh.hpp"
#include "ariis/sparse.hpp"
#include "ariis/valves.hpp"

namespace ariis {

/// A closed valve seen by the assembly: its band adds the resistive penalty
/// and `coefficient` scales the explicit normal load -coefficient*delta*n.
struct ActiveValve {
  ImmersedValve valve;
  double coefficient = 0.0;
};

/// Everything one backward-Euler step needs, on the current geometry.
struct AssemblyInput {
  std::span<const Vec3> u_prev;
  std::span<const Vec3> u_ale;
  std::span<const ActiveValve> valves;
  double p_inlet = 0.0;
  double p_outlet = 0.0;
  double rho = 1.06e3;
  double mu = 3.5e-3;
  double dt = 1e-3;
  double c_inv = 36.0;
  double c_sigma = 4.0;  ///< weight of the band reaction in tau
  bool grad_div = true;  ///< least-squares incompressibility term
  /// Vertices whose velocity is prescribed, and the prescribed values.
  std::span<const char> dirichlet;
  std::span<const Vec3> dirichlet_values;
};

struct LinearSystem {
  CsrMatrix A;
  std::vector<double> b;
};

/// Monolithic P1-P1 velocity-pressure system (unknowns interleaved per
/// vertex as u1, u2, u3, p) with SUPG/PSPG stabilisation, the resistive
/// penalty of closed valves and Neumann pressure loads. Dirichlet velocity
/// rows and columns are eliminated during the scatter.
class SystemAssembler {
 public:
  explicit SystemAssembler(const TetMesh& mesh);

  const BlockPattern& pattern() const { return pattern_; }
  std::size_t num_colors() const { return colors_.size(); }

  /// Coloured OpenMP element loop; deterministic for any thread count.
  void assemble(const TetMesh& mesh, const AssemblyInput& in, LinearSystem& out) const;
  /// Natural-order single-threaded reference.
  void assemble_serial(const TetMesh& mesh, const AssemblyInput& in, LinearSystem& out) const;

 private:
  void prepare(const TetMesh& mesh, const AssemblyInput& in, LinearSystem& out) const;
  void finish(const TetMesh& mesh, const AssemblyInput& in, LinearSystem& out) const;

  BlockPattern pattern_;
  std::vector<std::vector<int>> colors_;
};

/// Stabilisation parameter tau at a point with advection velocity `a`,
/// metric G = sum_k grad(lambda_k) grad(lambda_k)^T and reaction `sigma`
/// weighted by `c_sigma`.
double stabilization_tau(double rho, double mu, double dt, double c_inv, const Vec3& a,
                         const std::array<Vec3, 4>& grad, double sigma, double c_sigma = 1.0);

}  // namespace ariis
