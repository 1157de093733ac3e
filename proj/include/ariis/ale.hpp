#pragma once

#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "ariis/geometry.hpp"
#include "ariis/mesh.hpp"
#include "ariis/table.hpp"

namespace ariis {

/// Axial layout of the three-chamber cylinder (atrium, ventricle, aorta).
struct Compartments {
  double radius = 0.01;   ///< R_c
  double L_LA = 0.02;
  double L_LV = 0.06;
  double L_AA = 0.02;
  double total_length() const { return L_LA + L_LV + L_AA; }
};

/// Radial Gaussian bulge of the ventricular wall, amplitude A(t).
struct RadialPulseLaw {
  PiecewiseLinear amplitude;  ///< A(t), dimensionless
  double sigma = 0.015;
  double w_bar = 4.6e-4;
};

/// Ventricular shortening with prescribed length L*(t) and volume V*(t).
struct ShorteningLaw {
  PiecewiseLinear length;  ///< L*_LV(t) [m]
  PiecewiseLinear volume;  ///< V*_LV(t) [m^3]
};

struct StaticWall {};

using DisplacementLaw = std::variant<StaticWall, RadialPulseLaw, ShorteningLaw>;

Vec3 boundary_displacement_testA(const Vec3& x, double t, const RadialPulseLaw& law, const Compartments& comp);

/// Root c of pi c^2 L/2 + 4 R c L + (pi R^2 L - V) = 0 that vanishes at the
/// nominal volume V = pi R^2 L. Throws SolverError("unreachable volume ...")
/// for a negative discriminant.
double volume_match_coefficient(double L_star, double V_star, double R_c);

Vec3 boundary_displacement_testB(const Vec3& x, double t, const ShorteningLaw& law, const Compartments& comp);

Vec3 boundary_displacement(const DisplacementLaw& law, const Vec3& x, double t, const Compartments& comp);

/// Harmonic extension (K = I) of boundary displacements into the reference
/// domain with P1 elements. The interior stiffness block is factorised once.
class LiftingSolver {
 public:
  explicit LiftingSolver(const TetMesh& mesh);
  ~LiftingSolver();
  LiftingSolver(LiftingSolver&&) noexcept;
  LiftingSolver& operator=(LiftingSolver&&) noexcept;

  /// `boundary_values` holds one vector per mesh vertex; only boundary
  /// vertices are read. Returns the nodal displacement field.
  std::vector<Vec3> solve(std::span<const Vec3> boundary_values) const;

  std::span<const char> boundary_mask() const { return boundary_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::vector<char> boundary_;
};

std::vector<Vec3> solve_lifting(const TetMesh& mesh, std::span<const Vec3> boundary_values);

/// Current coordinates = reference + d. Throws MeshError on an inverted cell.
void move_mesh(TetMesh& mesh, std::span<const Vec3> displacement);

/// (d_now - d_prev) / dt, nodewise.
std::vector<Vec3> ale_velocity(std::span<const Vec3> d_now, std::span<const Vec3> d_prev, double dt);

}  // namespace ariis
