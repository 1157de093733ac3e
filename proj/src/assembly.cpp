#include "ariis/assembly.hpp"

#include <cmath>
#include <string>

#include "ariis/error.hpp"
#include "ariis/quadrature.hpp"

namespace ariis {

namespace {

struct ElementSystem {
  double K[16][16];
  double F[16];
};

void element_system(const TetMesh& mesh, const AssemblyInput& in, int cell, ElementSystem& e) {
  const auto x = mesh.cell_coordinates(cell);
  const Cell& v = mesh.cells()[cell];
  std::array<Vec3, 4> g;
  double vol = 0.0;
  if (!barycentric_gradients(x, g, vol) || vol <= 0.0) {
    throw MeshError("assembly on inverted cell " + std::to_string(cell));
  }
  for (auto& row : e.K) std::fill(std::begin(row), std::end(row), 0.0);
  std::fill(std::begin(e.F), std::end(e.F), 0.0);

  bool in_band = false;
  for (const auto& av : in.valves) in_band = in_band || cell_intersects_band(av.valve, x);
  const auto rule = tet_quadrature(in.valves.empty() || !in_band ? 2 : 5);

  const double rho = in.rho;
  const double mu = in.mu;
  const double rdt = rho / in.dt;

  // Viscous block, constant per cell.
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      const double gg = dot(g[a], g[b]);
      for (int i = 0; i < 3; ++i) {
        e.K[4 * a + i][4 * b + i] += vol * mu * gg;
        for (int j = 0; j < 3; ++j) e.K[4 * a + i][4 * b + j] += vol * mu * g[a][j] * g[b][i];
      }
    }
  }

  // Quadrature-point data; tau is computed once per element from the
  // centroid advection velocity and the largest band reaction.
  struct PointData {
    Vec3 un, ua;
    double sigma;
    Vec3 f;
  };
  std::array<PointData, 14> pd;
  double sigma_max = 0.0;
  for (std::size_t k = 0; k < rule.size(); ++k) {
    const auto& q = rule[k];
    Vec3 xq{}, un{}, ua{};
    for (int a = 0; a < 4; ++a) {
      xq += q.bary[a] * x[a];
      un += q.bary[a] * in.u_prev[v[a]];
      ua += q.bary[a] * in.u_ale[v[a]];
    }
    double sigma = 0.0;
    Vec3 f{};
    if (in_band) {
      for (const auto& av : in.valves) {
        const double d = smoothed_delta(signed_distance(av.valve, xq), av.valve.half_thickness);
        if (d == 0.0) continue;
        sigma += av.valve.resistance / av.valve.half_thickness * d;
        f -= (av.coefficient * d) * av.valve.normal;
      }
      f += sigma * ua;
    }
    pd[k] = {un, ua, sigma, f};
    sigma_max = std::max(sigma_max, sigma);
  }
  Vec3 adv_c{};
  for (int a = 0; a < 4; ++a) adv_c += 0.25 * (in.u_prev[v[a]] - in.u_ale[v[a]]);
  const double tau = stabilization_tau(rho, mu, in.dt, in.c_inv, adv_c, g, sigma_max, in.c_sigma);

  // Least-squares incompressibility (grad-div) term.
  if (in.grad_div) {
    const double nu_c = vol / (tau * (dot(g[1], g[1]) + dot(g[2], g[2]) + dot(g[3], g[3])));
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        for (int i = 0; i < 3; ++i) {
          for (int j = 0; j < 3; ++j) e.K[4 * a + i][4 * b + j] += nu_c * g[a][i] * g[b][j];
        }
      }
    }
  }

  for (std::size_t k = 0; k < rule.size(); ++k) {
    const auto& q = rule[k];
    const double w = q.weight * vol;
    const Vec3 adv = pd[k].un - pd[k].ua;
    const double sigma = pd[k].sigma;
    const Vec3 r = rdt * pd[k].un + pd[k].f;

    double ag[4];
    for (int a = 0; a < 4; ++a) ag[a] = dot(adv, g[a]);
    for (int a = 0; a < 4; ++a) {
      const double Na = q.bary[a];
      const double supg = tau * rho * ag[a];
      for (int b = 0; b < 4; ++b) {
        const double Nb = q.bary[b];
        const double res = (rdt + sigma) * Nb + rho * ag[b];
        const double uu = w * ((rdt + sigma) * Na * Nb + rho * Na * ag[b] + supg * res);
        for (int i = 0; i < 3; ++i) {
          e.K[4 * a + i][4 * b + i] += uu;
          e.K[4 * a + i][4 * b + 3] += w * (-g[a][i] * Nb + supg * g[b][i]);
          e.K[4 * a + 3][4 * b + i] += w * (Na * g[b][i] + tau * g[a][i] * res);
        }
        e.K[4 * a + 3][4 * b + 3] += w * tau * dot(g[a], g[b]);
      }
      for (int i = 0; i < 3; ++i) e.F[4 * a + i] += w * (Na + supg) * r[i];
      e.F[4 * a + 3] += w * tau * dot(g[a], r);
    }
  }
}

void scatter(const BlockPattern& pattern, const TetMesh& mesh, const AssemblyInput& in, int cell,
             const ElementSystem& e, LinearSystem& out) {
  const Cell& v = mesh.cells()[cell];
  for (int a = 0; a < 4; ++a) {
    for (int i = 0; i < 4; ++i) {
      if (i < 3 && in.dirichlet[v[a]]) continue;
      const int row = 4 * v[a] + i;
      out.b[row] += e.F[4 * a + i];
      for (int b = 0; b < 4; ++b) {
        for (int j = 0; j < 4; ++j) {
          const double k = e.K[4 * a + i][4 * b + j];
          if (j < 3 && in.dirichlet[v[b]]) {
            out.b[row] -= k * in.dirichlet_values[v[b]][j];
          } else {
            out.A.values[pattern.entry(cell, a, b, i, j)] += k;
          }
        }
      }
    }
  }
}

}  // namespace

double stabilization_tau(double rho, double mu, double dt, double c_inv, const Vec3& a,
                         const std::array<Vec3, 4>& grad, double sigma, double c_sigma) {
  double G[3][3] = {};
  for (int k = 1; k < 4; ++k) {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) G[i][j] += grad[k][i] * grad[k][j];
    }
  }
  double aGa = 0.0, GG = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      aGa += a[i] * G[i][j] * a[j];
      GG += G[i][j] * G[i][j];
    }
  }
  const double t = 2.0 * rho / dt;
  const double s = c_sigma * sigma;
  return 1.0 / std::sqrt(t * t + rho * rho * aGa + c_inv * mu * mu * GG + s * s);
}

SystemAssembler::SystemAssembler(const TetMesh& mesh) : pattern_(mesh, 4), colors_(color_cells(mesh)) {}

void SystemAssembler::prepare(const TetMesh& mesh, const AssemblyInput& in, LinearSystem& out) const {
  const std::size_t nv = mesh.num_vertices();
  if (in.u_prev.size() != nv || in.u_ale.size() != nv || in.dirichlet.size() != nv ||
      in.dirichlet_values.size() != nv) {
    throw SolverError("assembly input size does not match the mesh");
  }
  if (out.A.rows != pattern_.rows()) {
    out.A = pattern_.make_matrix();
  } else {
    std::fill(out.A.values.begin(), out.A.values.end(), 0.0);
  }
  out.b.assign(static_cast<std::size_t>(pattern_.rows()), 0.0);
}

void SystemAssembler::finish(const TetMesh& mesh, const AssemblyInput& in, LinearSystem& out) const {
  const auto faces = mesh.boundary_faces();
  for (std::size_t f = 0; f < faces.size(); ++f) {
    double p = 0.0;
    if (faces[f].tag == BoundaryTag::Inlet) {
      p = in.p_inlet;
    } else if (faces[f].tag == BoundaryTag::Outlet) {
      p = in.p_outlet;
    } else {
      continue;
    }
    const Vec3 load = (-p * mesh.face_area(f) / 3.0) * mesh.face_normal(f);
    for (int vtx : faces[f].vertices) {
      if (in.dirichlet[vtx]) continue;
      for (int i = 0; i < 3; ++i) out.b[4 * vtx + i] += load[i];
    }
  }
  const int nv = static_cast<int>(mesh.num_vertices());
  for (int vtx = 0; vtx < nv; ++vtx) {
    if (!in.dirichlet[vtx]) continue;
    for (int i = 0; i < 3; ++i) {
      const int row = 4 * vtx + i;
      out.A.values[out.A.find(row, row)] = 1.0;
      out.b[row] = in.dirichlet_values[vtx][i];
    }
  }
}

void SystemAssembler::assemble(const TetMesh& mesh, const AssemblyInput& in, LinearSystem& out) const {
  prepare(mesh, in, out);
  for (const auto& color : colors_) {
    const int n = static_cast<int>(color.size());
    bool failed = false;
    std::string message;
#pragma omp parallel for schedule(static)
    for (int k = 0; k < n; ++k) {
      ElementSystem e;
      try {
        element_system(mesh, in, color[k], e);
        scatter(pattern_, mesh, in, color[k], e, out);
      } catch (const std::exception& ex) {
#pragma omp critical(ariis_assembly_error)
        {
          if (!failed) message = ex.what();
          failed = true;
        }
      }
    }
    if (failed) throw MeshError(message);
  }
  finish(mesh, in, out);
}

void SystemAssembler::assemble_serial(const TetMesh& mesh, const AssemblyInput& in, LinearSystem& out) const {
  prepare(mesh, in, out);
  ElementSystem e;
  for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
    element_system(mesh, in, c, e);
    scatter(pattern_, mesh, in, c, e, out);
  }
  finish(mesh, in, out);
}

}  // namespace ariis
