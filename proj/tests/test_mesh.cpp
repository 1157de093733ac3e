#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "ariis/error.hpp"
#include "ariis/mesh.hpp"

using namespace ariis;

namespace {

TetMesh unit_tet(double edge) {
  // Regular tetrahedron with all six edges equal to `edge`.
  const double s = edge / std::sqrt(2.0);
  std::vector<Vec3> x{{0, 0, 0}, {s, s, 0}, {s, 0, s}, {0, s, s}};
  std::vector<Cell> cells{{0, 1, 2, 3}};
  std::vector<BoundaryFace> faces;
  for (const auto& f : extract_boundary_triangles(cells)) faces.push_back({f, BoundaryTag::Wall, -1});
  return TetMesh(x, cells, faces);
}

CylinderGrading uniform(double h) {
  CylinderGrading g;
  g.h_min = h;
  g.h_max = h;
  g.radial_size = h;
  return g;
}

double surface_area(const TetMesh& m) {
  double a = 0.0;
  for (std::size_t f = 0; f < m.boundary_faces().size(); ++f) a += m.face_area(f);
  return a;
}

}  // namespace

TEST_SUITE("mesh") {

TEST_CASE("regular tetrahedron diameter equals its edge") {
  const TetMesh m = unit_tet(1e-3);
  const auto d = cell_diameters(m);
  REQUIRE(d.diameters.size() == 1);
  CHECK(d.diameters[0] == doctest::Approx(1e-3).epsilon(1e-14));
  CHECK(d.h_min == d.h_max);
  CHECK(m.cell_volume(0) == doctest::Approx(std::pow(1e-3, 3) / (6.0 * std::sqrt(2.0))).epsilon(1e-12));
}

TEST_CASE("cells are reoriented to positive volume") {
  std::vector<Vec3> x{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  std::vector<Cell> cells{{0, 2, 1, 3}};
  std::vector<BoundaryFace> faces;
  for (const auto& f : extract_boundary_triangles(cells)) faces.push_back({f, BoundaryTag::Wall, -1});
  const TetMesh m(x, cells, faces);
  CHECK(m.cell_volume(0) == doctest::Approx(1.0 / 6.0));
  for (std::size_t f = 0; f < m.boundary_faces().size(); ++f) {
    // Outward: normal points away from the centroid.
    const auto& v = m.boundary_faces()[f].vertices;
    const Vec3 c = (1.0 / 3.0) * (x[v[0]] + x[v[1]] + x[v[2]]);
    CHECK(dot(m.face_normal(f), c - m.cell_centroid(0)) > 0.0);
  }
}

TEST_CASE("invalid meshes are rejected") {
  std::vector<Vec3> x{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  std::vector<Cell> cells{{0, 1, 2, 3}};
  auto tri = extract_boundary_triangles(cells);
  SUBCASE("untagged boundary face") {
    std::vector<BoundaryFace> faces;
    for (std::size_t i = 0; i + 1 < tri.size(); ++i) faces.push_back({tri[i], BoundaryTag::Wall, -1});
    CHECK_THROWS_AS(TetMesh(x, cells, faces), MeshError);
  }
  SUBCASE("degenerate cell") {
    std::vector<Vec3> flat{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}};
    std::vector<BoundaryFace> faces;
    for (const auto& f : tri) faces.push_back({f, BoundaryTag::Wall, -1});
    CHECK_THROWS_AS(TetMesh(flat, cells, faces), MeshError);
  }
  SUBCASE("inverting motion leaves the mesh unchanged") {
    std::vector<BoundaryFace> faces;
    for (const auto& f : tri) faces.push_back({f, BoundaryTag::Wall, -1});
    TetMesh m(x, cells, faces);
    std::vector<Vec3> bad = x;
    bad[3] = {0, 0, -1};
    CHECK_THROWS_WITH_AS(m.set_current_vertices(bad), doctest::Contains("cell 0"), MeshError);
    CHECK(m.vertices()[3] == x[3]);
  }
}

TEST_CASE("uniform cylinder: diameters, volume, tags") {
  const TetMesh m = generate_cylinder_mesh(0.01, 0.1, uniform(0.005));
  const auto d = cell_diameters(m);
  for (double v : d.diameters) {
    CHECK(v >= 0.0025);
    CHECK(v <= 0.01 * (1.0 + 1e-12));
  }
  const double exact = std::numbers::pi * 1e-4 * 0.1;
  CHECK(std::abs(m.total_volume() - exact) / exact < 0.05);
  const TetMesh fine = generate_cylinder_mesh(0.01, 0.1, uniform(0.0025));
  CHECK(std::abs(fine.total_volume() - exact) / exact < 0.02);

  std::size_t in = 0, out = 0, wall = 0;
  for (const auto& f : m.boundary_faces()) {
    in += f.tag == BoundaryTag::Inlet;
    out += f.tag == BoundaryTag::Outlet;
    wall += f.tag == BoundaryTag::Wall;
  }
  CHECK(in + out + wall == m.boundary_faces().size());
  CHECK(in > 0);
  CHECK(in == out);
  for (const auto& f : m.boundary_faces()) {
    for (int v : f.vertices) {
      const Vec3 x = m.vertices()[v];
      if (f.tag == BoundaryTag::Inlet) CHECK(std::abs(x.z) < 1e-10);
      if (f.tag == BoundaryTag::Outlet) CHECK(std::abs(x.z - 0.1) < 1e-10);
      if (f.tag == BoundaryTag::Wall) CHECK(std::hypot(x.x, x.y) == doctest::Approx(0.01).epsilon(1e-9));
    }
  }
}

TEST_CASE("volume and surface area converge under refinement") {
  const double v_exact = std::numbers::pi * 1e-4 * 0.1;
  const double a_exact = 2.0 * std::numbers::pi * 0.01 * 0.1 + 2.0 * std::numbers::pi * 1e-4;
  double prev_v = 1.0, prev_a = 1.0;
  for (double h : {0.005, 0.0025, 0.00125}) {
    const TetMesh m = generate_cylinder_mesh(0.01, 0.1, uniform(h));
    const double ev = std::abs(m.total_volume() - v_exact) / v_exact;
    const double ea = std::abs(surface_area(m) - a_exact) / a_exact;
    CHECK(ev < prev_v);
    CHECK(ea < prev_a);
    prev_v = ev;
    prev_a = ea;
  }
}

TEST_CASE("graded cylinder: band centres on layers and reported sizes within 2x") {
  CylinderGrading g;
  g.h_min = 0.001;
  g.h_max = 0.0046;
  g.radial_size = 0.00167;
  g.bands = {{0.02, 0.006}, {0.08, 0.006}};
  const auto layers = cylinder_axial_layers(0.1, g);
  for (double c : {0.02, 0.08}) {
    bool found = false;
    for (double z : layers) found = found || std::abs(z - c) < 1e-12;
    CHECK(found);
  }
  for (std::size_t i = 1; i < layers.size(); ++i) {
    const double h = layers[i] - layers[i - 1];
    CHECK(h > 0.0);
    CHECK(h <= g.h_max * (1.0 + 1e-9));
    if (layers[i] > 0.0175 && layers[i] < 0.0225) CHECK(h == doctest::Approx(g.h_min).epsilon(0.05));
  }
  const TetMesh m = generate_cylinder_mesh(0.01, 0.1, g);
  const auto d = cell_diameters(m);
  CHECK(d.h_min <= 2.0 * g.h_min);
  CHECK(d.h_min >= 0.5 * g.h_min);
  CHECK(d.h_max <= 2.0 * g.h_max);
  CHECK(d.h_max >= 0.5 * g.h_max);
  CHECK(m.num_cells() > 2e4);
  CHECK(m.num_cells() < 8e4);
}

TEST_CASE("generator rejects bad input") {
  CHECK_THROWS_AS(generate_cylinder_mesh(-1.0, 0.1, uniform(0.005)), MeshError);
  CylinderGrading g = uniform(0.005);
  g.h_min = 0.01;
  g.h_max = 0.005;
  CHECK_THROWS_AS(generate_cylinder_mesh(0.01, 0.1, g), MeshError);
  g = uniform(0.005);
  g.bands = {{0.2, 0.006}};
  CHECK_THROWS_AS(generate_cylinder_mesh(0.01, 0.1, g), MeshError);
}

TEST_CASE("cell colouring is vertex-disjoint and complete") {
  const TetMesh m = generate_cylinder_mesh(0.01, 0.05, uniform(0.005));
  const auto colors = color_cells(m);
  std::vector<int> seen(m.num_cells(), 0);
  for (const auto& group : colors) {
    std::set<int> used;
    for (int c : group) {
      ++seen[c];
      for (int v : m.cells()[c]) CHECK(used.insert(v).second);
    }
  }
  for (int s : seen) CHECK(s == 1);
}

}  // TEST_SUITE
