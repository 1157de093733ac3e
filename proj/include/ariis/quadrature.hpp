#pragma once

#include <array>
#include <span>

namespace ariis {

/// Quadrature point on a tetrahedron in barycentric coordinates. Weights are
/// normalised to sum to one (multiply by the cell volume).
struct TetQuadPoint {
  std::array<double, 4> bary;
  double weight;
};

/// Symmetric positive-weight rules exact for polynomials of the given total
/// degree. Supported degrees: 1 (centroid), 2 (4 points), 5 (14 points).
/// Other requests are rounded up to the next supported degree (max 5).
std::span<const TetQuadPoint> tet_quadrature(int degree);

}  // namespace ariis
