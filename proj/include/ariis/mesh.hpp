#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ariis/geometry.hpp"

namespace ariis {

enum class BoundaryTag : std::uint8_t { Inlet = 1, Outlet = 2, Wall = 3 };

std::string to_string(BoundaryTag tag);

struct BoundaryFace {
  std::array<int, 3> vertices{};
  BoundaryTag tag = BoundaryTag::Wall;
  int cell = -1;  ///< owning cell, filled in by TetMesh
};

using Cell = std::array<int, 4>;

/// Unstructured tetrahedral mesh with tagged boundary triangles.
///
/// The mesh keeps two coordinate sets: the immutable reference coordinates
/// (the domain at t = 0) and the current coordinates, which the ALE module
/// replaces between time steps. The connectivity never changes.
///
/// Construction validates the invariants: cells are reoriented to positive
/// signed volume (zero volume is rejected), every boundary triangle of the
/// cell complex carries exactly one tag, interior faces are shared by two
/// cells, and the boundary is a closed surface. Boundary faces are stored
/// with an outward orientation.
class TetMesh {
 public:
  TetMesh() = default;
  TetMesh(std::vector<Vec3> vertices, std::vector<Cell> cells, std::vector<BoundaryFace> boundary_faces);

  std::size_t num_vertices() const { return reference_.size(); }
  std::size_t num_cells() const { return cells_.size(); }

  std::span<const Vec3> reference_vertices() const { return reference_; }
  std::span<const Vec3> vertices() const { return current_; }
  std::span<const Cell> cells() const { return cells_; }
  std::span<const BoundaryFace> boundary_faces() const { return faces_; }

  /// Replaces the current coordinates. Throws MeshError (naming the first
  /// inverted cell) if any cell would get a non-positive volume; the mesh is
  /// left unchanged in that case.
  void set_current_vertices(std::vector<Vec3> coordinates);

  std::array<Vec3, 4> cell_coordinates(std::size_t cell) const;
  std::array<Vec3, 4> reference_cell_coordinates(std::size_t cell) const;
  double cell_volume(std::size_t cell) const;
  Vec3 cell_centroid(std::size_t cell) const;
  double total_volume() const;

  /// Outward unit normal and area of a boundary face on the current geometry.
  Vec3 face_normal(std::size_t face) const;
  double face_area(std::size_t face) const;

  /// Vertices lying on at least one face with the given tag.
  std::vector<char> tagged_vertex_mask(BoundaryTag tag) const;
  std::vector<char> boundary_vertex_mask() const;

 private:
  std::vector<Vec3> reference_;
  std::vector<Vec3> current_;
  std::vector<Cell> cells_;
  std::vector<BoundaryFace> faces_;
};

/// Faces of the cell complex that belong to exactly one cell (vertex order arbitrary).
/// Throws MeshError if a face is shared by more than two cells.
std::vector<std::array<int, 3>> extract_boundary_triangles(std::span<const Cell> cells);

struct AxialBand {
  double center = 0.0;
  double width = 0.0;
};

/// Size targets for the cylinder generator. Inside a band the axial layer
/// thickness is h_min; outside it grows linearly with distance (rate `growth`)
/// up to h_max. Without bands the axial spacing is uniform h_max. The disc
/// triangulation is uniform with edge length close to `radial_size`
/// (defaults to h_min when not positive).
struct CylinderGrading {
  double h_min = 0.0;
  double h_max = 0.0;
  std::vector<AxialBand> bands;
  double growth = 0.3;
  double radial_size = 0.0;
};

/// Conforming tetrahedral mesh of the cylinder {x1^2 + x2^2 <= radius^2, 0 <= x3 <= total_length}.
/// Band centers are always placed exactly on a layer of vertices. Inlet is the
/// x3 = 0 disc, outlet the x3 = total_length disc, wall the lateral surface.
TetMesh generate_cylinder_mesh(double radius, double total_length, const CylinderGrading& grading);

/// z coordinates of the axial vertex layers the generator would use.
std::vector<double> cylinder_axial_layers(double total_length, const CylinderGrading& grading);

struct CellDiameters {
  std::vector<double> diameters;
  double h_min = 0.0;
  double h_max = 0.0;
};

/// Longest-edge diameter of every cell (current coordinates).
CellDiameters cell_diameters(const TetMesh& mesh);

/// Greedy vertex-disjoint colouring of the cells: no two cells of the same
/// colour share a vertex. Lists are in increasing cell order.
std::vector<std::vector<int>> color_cells(const TetMesh& mesh);

}  // namespace ariis
