#include "ariis/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <unordered_map>

#include "ariis/error.hpp"

namespace ariis {

std::string to_string(BoundaryTag tag) {
  switch (tag) {
    case BoundaryTag::Inlet:
      return "inlet";
    case BoundaryTag::Outlet:
      return "outlet";
    case BoundaryTag::Wall:
      return "wall";
  }
  return "unknown";
}

namespace {

using FaceKey = std::uint64_t;

FaceKey face_key(std::array<int, 3> v) {
  std::sort(v.begin(), v.end());
  return (static_cast<FaceKey>(v[0]) << 42) | (static_cast<FaceKey>(v[1]) << 21) | static_cast<FaceKey>(v[2]);
}

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

constexpr std::array<std::array<int, 3>, 4> kCellFaces{{{1, 2, 3}, {0, 3, 2}, {0, 1, 3}, {0, 2, 1}}};

struct FaceUse {
  int count = 0;
  int cell = -1;
  int local = -1;
};

std::unordered_map<FaceKey, FaceUse> count_faces(std::span<const Cell> cells) {
  std::unordered_map<FaceKey, FaceUse> faces;
  faces.reserve(cells.size() * 3);
  for (std::size_t c = 0; c < cells.size(); ++c) {
    for (int f = 0; f < 4; ++f) {
      const auto& lf = kCellFaces[f];
      auto& use = faces[face_key({cells[c][lf[0]], cells[c][lf[1]], cells[c][lf[2]]})];
      ++use.count;
      use.cell = static_cast<int>(c);
      use.local = f;
    }
  }
  return faces;
}

}  // namespace

std::vector<std::array<int, 3>> extract_boundary_triangles(std::span<const Cell> cells) {
  const auto faces = count_faces(cells);
  std::vector<std::array<int, 3>> out;
  for (const auto& [key, use] : faces) {
    if (use.count > 2) throw MeshError("face shared by more than two cells");
    if (use.count == 1) {
      const auto& lf = kCellFaces[use.local];
      const Cell& c = cells[use.cell];
      out.push_back({c[lf[0]], c[lf[1]], c[lf[2]]});
    }
  }
  // Deterministic order independent of the hash layout.
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    auto sa = a, sb = b;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    return sa < sb;
  });
  return out;
}

TetMesh::TetMesh(std::vector<Vec3> vertices, std::vector<Cell> cells, std::vector<BoundaryFace> boundary_faces)
    : reference_(std::move(vertices)), cells_(std::move(cells)) {
  const int nv = static_cast<int>(reference_.size());
  if (nv >= (1 << 21)) throw MeshError("mesh too large: vertex index exceeds 21 bits");
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    for (int v : cells_[c]) {
      if (v < 0 || v >= nv) throw MeshError("cell " + std::to_string(c) + " references a missing vertex");
    }
    const auto& k = cells_[c];
    const double vol = signed_tet_volume(reference_[k[0]], reference_[k[1]], reference_[k[2]], reference_[k[3]]);
    if (vol == 0.0 || !std::isfinite(vol)) throw MeshError("degenerate cell " + std::to_string(c));
    if (vol < 0.0) std::swap(cells_[c][2], cells_[c][3]);
  }

  const auto faces = count_faces(cells_);
  std::size_t n_boundary = 0;
  for (const auto& [key, use] : faces) {
    if (use.count > 2) throw MeshError("face shared by more than two cells");
    if (use.count == 1) ++n_boundary;
  }

  std::unordered_map<FaceKey, int> tagged;
  tagged.reserve(boundary_faces.size());
  for (const auto& bf : boundary_faces) {
    const FaceKey key = face_key(bf.vertices);
    auto it = faces.find(key);
    if (it == faces.end() || it->second.count != 1) throw MeshError("tagged face is not a boundary face of the cell complex");
    if (!tagged.emplace(key, 1).second) throw MeshError("boundary face carries more than one tag");
    const auto& use = it->second;
    const auto& lf = kCellFaces[use.local];
    const Cell& c = cells_[use.cell];
    faces_.push_back({{c[lf[0]], c[lf[1]], c[lf[2]]}, bf.tag, use.cell});
  }
  if (tagged.size() != n_boundary) throw MeshError("untagged boundary face");

  std::unordered_map<std::uint64_t, int> edges;
  for (const auto& f : faces_) {
    for (int e = 0; e < 3; ++e) ++edges[edge_key(f.vertices[e], f.vertices[(e + 1) % 3])];
  }
  for (const auto& [key, count] : edges) {
    if (count != 2) throw MeshError("boundary surface is not closed");
  }
  current_ = reference_;
}

void TetMesh::set_current_vertices(std::vector<Vec3> coordinates) {
  if (coordinates.size() != reference_.size()) throw MeshError("coordinate array size does not match the mesh");
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    const auto& k = cells_[c];
    const double vol = signed_tet_volume(coordinates[k[0]], coordinates[k[1]], coordinates[k[2]], coordinates[k[3]]);
    if (!(vol > 0.0)) {
      std::ostringstream msg;
      msg << "inverted cell " << c << " (volume " << vol << ")";
      throw MeshError(msg.str());
    }
  }
  current_ = std::move(coordinates);
}

std::array<Vec3, 4> TetMesh::cell_coordinates(std::size_t cell) const {
  const auto& k = cells_[cell];
  return {current_[k[0]], current_[k[1]], current_[k[2]], current_[k[3]]};
}

std::array<Vec3, 4> TetMesh::reference_cell_coordinates(std::size_t cell) const {
  const auto& k = cells_[cell];
  return {reference_[k[0]], reference_[k[1]], reference_[k[2]], reference_[k[3]]};
}

double TetMesh::cell_volume(std::size_t cell) const {
  const auto x = cell_coordinates(cell);
  return signed_tet_volume(x[0], x[1], x[2], x[3]);
}

Vec3 TetMesh::cell_centroid(std::size_t cell) const {
  const auto x = cell_coordinates(cell);
  return 0.25 * (x[0] + x[1] + x[2] + x[3]);
}

double TetMesh::total_volume() const {
  double v = 0.0;
  for (std::size_t c = 0; c < cells_.size(); ++c) v += cell_volume(c);
  return v;
}

Vec3 TetMesh::face_normal(std::size_t face) const {
  const auto& f = faces_[face].vertices;
  const Vec3 n = cross(current_[f[1]] - current_[f[0]], current_[f[2]] - current_[f[0]]);
  return (1.0 / norm(n)) * n;
}

double TetMesh::face_area(std::size_t face) const {
  const auto& f = faces_[face].vertices;
  return 0.5 * norm(cross(current_[f[1]] - current_[f[0]], current_[f[2]] - current_[f[0]]));
}

std::vector<char> TetMesh::tagged_vertex_mask(BoundaryTag tag) const {
  std::vector<char> mask(num_vertices(), 0);
  for (const auto& f : faces_) {
    if (f.tag != tag) continue;
    for (int v : f.vertices) mask[v] = 1;
  }
  return mask;
}

std::vector<char> TetMesh::boundary_vertex_mask() const {
  std::vector<char> mask(num_vertices(), 0);
  for (const auto& f : faces_) {
    for (int v : f.vertices) mask[v] = 1;
  }
  return mask;
}

// ---------------------------------------------------------------------------
// Cylinder generator

namespace {

struct Disc {
  std::vector<double> x, y;
  std::vector<std::array<int, 3>> triangles;
};

// Concentric rings with 6*i vertices on ring i. Neighbouring rings are
// stitched by marching both rings in angle.
Disc triangulate_disc(double radius, int rings) {
  Disc d;
  d.x.push_back(0.0);
  d.y.push_back(0.0);
  std::vector<int> ring_start{0};
  for (int i = 1; i <= rings; ++i) {
    ring_start.push_back(static_cast<int>(d.x.size()));
    const int n = 6 * i;
    const double r = radius * static_cast<double>(i) / rings;
    for (int j = 0; j < n; ++j) {
      const double theta = 2.0 * std::numbers::pi * j / n;
      d.x.push_back(r * std::cos(theta));
      d.y.push_back(r * std::sin(theta));
    }
  }
  for (int i = 1; i <= rings; ++i) {
    const int n = 6 * i;
    const int outer = ring_start[i];
    if (i == 1) {
      for (int j = 0; j < n; ++j) d.triangles.push_back({0, outer + j, outer + (j + 1) % n});
      continue;
    }
    const int m = 6 * (i - 1);
    const int inner = ring_start[i - 1];
    int a = 0, b = 0;
    while (a < m || b < n) {
      const double next_outer = (b + 1.0) / n;
      const double next_inner = (a + 1.0) / m;
      if (b < n && (a >= m || next_outer <= next_inner)) {
        d.triangles.push_back({inner + a % m, outer + b, outer + (b + 1) % n});
        ++b;
      } else {
        d.triangles.push_back({inner + a % m, outer + b % n, inner + (a + 1) % m});
        ++a;
      }
    }
  }
  return d;
}

double target_size(double z, const CylinderGrading& g) {
  if (g.bands.empty()) return g.h_max;
  double best = g.h_max;
  for (const auto& band : g.bands) {
    const double dist = std::max(0.0, std::abs(z - band.center) - 0.5 * band.width);
    best = std::min(best, g.h_min + g.growth * dist);
  }
  return std::clamp(best, g.h_min, g.h_max);
}

void validate_grading(double total_length, const CylinderGrading& g) {
  if (!(g.h_min > 0.0) || !(g.h_max >= g.h_min)) throw MeshError("grading requires 0 < h_min <= h_max");
  if (!(g.growth > 0.0)) throw MeshError("grading growth rate must be positive");
  for (const auto& band : g.bands) {
    if (!(band.width >= 0.0) || band.center - 0.5 * band.width < 0.0 || band.center + 0.5 * band.width > total_length) {
      throw MeshError("grading band outside [0, total_length]");
    }
  }
}

}  // namespace

std::vector<double> cylinder_axial_layers(double total_length, const CylinderGrading& grading) {
  if (!(total_length > 0.0)) throw MeshError("cylinder length must be positive");
  validate_grading(total_length, grading);

  std::vector<double> fixed{0.0, total_length};
  for (const auto& band : grading.bands) fixed.push_back(band.center);
  std::sort(fixed.begin(), fixed.end());
  fixed.erase(std::unique(fixed.begin(), fixed.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }),
              fixed.end());

  std::vector<double> layers{0.0};
  for (std::size_t s = 0; s + 1 < fixed.size(); ++s) {
    const double z0 = fixed[s];
    const double z1 = fixed[s + 1];
    // Cumulative "number of elements" s(z) = int dz / h(z) on a fine table.
    constexpr int samples = 4000;
    std::vector<double> zs(samples + 1), cum(samples + 1, 0.0);
    for (int i = 0; i <= samples; ++i) zs[i] = z0 + (z1 - z0) * i / samples;
    for (int i = 1; i <= samples; ++i) {
      const double zm = 0.5 * (zs[i - 1] + zs[i]);
      cum[i] = cum[i - 1] + (zs[i] - zs[i - 1]) / target_size(zm, grading);
    }
    const int n = std::max(1, static_cast<int>(std::ceil(cum.back() - 1e-9)));
    for (int k = 1; k < n; ++k) {
      const double target = cum.back() * k / n;
      const auto it = std::lower_bound(cum.begin(), cum.end(), target);
      const std::size_t i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(1, it - cum.begin()));
      const double t = (target - cum[i - 1]) / (cum[i] - cum[i - 1]);
      layers.push_back(zs[i - 1] + t * (zs[i] - zs[i - 1]));
    }
    layers.push_back(z1);
  }
  return layers;
}

TetMesh generate_cylinder_mesh(double radius, double total_length, const CylinderGrading& grading) {
  if (!(radius > 0.0)) throw MeshError("cylinder radius must be positive");
  const auto layers = cylinder_axial_layers(total_length, grading);
  const double h_radial = grading.radial_size > 0.0 ? grading.radial_size : grading.h_min;
  const int rings = std::max(1, static_cast<int>(std::ceil(radius / h_radial - 1e-9)));
  const Disc disc = triangulate_disc(radius, rings);
  const int nd = static_cast<int>(disc.x.size());
  const int nl = static_cast<int>(layers.size());

  std::vector<Vec3> vertices;
  vertices.reserve(static_cast<std::size_t>(nd) * nl);
  for (int l = 0; l < nl; ++l) {
    for (int i = 0; i < nd; ++i) vertices.push_back({disc.x[i], disc.y[i], layers[l]});
  }

  // Each prism is split using the ordering of its (sorted) bottom vertices, so
  // the diagonal of every quadrilateral side depends only on its two vertical
  // edges and neighbouring prisms conform.
  std::vector<Cell> cells;
  cells.reserve(disc.triangles.size() * 3 * (nl - 1));
  for (int l = 0; l + 1 < nl; ++l) {
    for (auto tri : disc.triangles) {
      std::sort(tri.begin(), tri.end());
      const int a = l * nd + tri[0], b = l * nd + tri[1], c = l * nd + tri[2];
      const int a1 = a + nd, b1 = b + nd, c1 = c + nd;
      cells.push_back({a, b, c, c1});
      cells.push_back({a, b, b1, c1});
      cells.push_back({a, a1, b1, c1});
    }
  }

  constexpr double tol = 1e-10;
  std::vector<BoundaryFace> faces;
  for (const auto& tri : extract_boundary_triangles(cells)) {
    BoundaryTag tag = BoundaryTag::Wall;
    const bool bottom = std::all_of(tri.begin(), tri.end(), [&](int v) { return std::abs(vertices[v].z) < tol; });
    const bool top =
        std::all_of(tri.begin(), tri.end(), [&](int v) { return std::abs(vertices[v].z - total_length) < tol; });
    if (bottom) tag = BoundaryTag::Inlet;
    if (top) tag = BoundaryTag::Outlet;
    faces.push_back({tri, tag, -1});
  }
  return TetMesh(std::move(vertices), std::move(cells), std::move(faces));
}

CellDiameters cell_diameters(const TetMesh& mesh) {
  CellDiameters out;
  out.diameters.resize(mesh.num_cells());
  out.h_min = std::numeric_limits<double>::infinity();
  out.h_max = 0.0;
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto x = mesh.cell_coordinates(c);
    double longest = 0.0;
    for (int i = 0; i < 4; ++i) {
      for (int j = i + 1; j < 4; ++j) longest = std::max(longest, norm(x[i] - x[j]));
    }
    out.diameters[c] = longest;
    out.h_min = std::min(out.h_min, longest);
    out.h_max = std::max(out.h_max, longest);
  }
  if (mesh.num_cells() == 0) out.h_min = 0.0;
  return out;
}

std::vector<std::vector<int>> color_cells(const TetMesh& mesh) {
  const auto cells = mesh.cells();
  std::vector<std::vector<int>> vertex_colors(mesh.num_vertices());
  std::vector<std::vector<int>> colors;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    int color = 0;
    for (;; ++color) {
      bool used = false;
      for (int v : cells[c]) {
        const auto& vc = vertex_colors[v];
        if (std::find(vc.begin(), vc.end(), color) != vc.end()) {
          used = true;
          break;
        }
      }
      if (!used) break;
    }
    if (static_cast<std::size_t>(color) >= colors.size()) colors.resize(color + 1);
    colors[color].push_back(static_cast<int>(c));
    for (int v : cells[c]) vertex_colors[v].push_back(color);
  }
  return colors;
}

}  // namespace ariis
