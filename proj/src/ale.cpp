#include "ariis/ale.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <cmath>
#include <numbers>

#include "ariis/error.hpp"

namespace ariis {

namespace {

// Unit radial direction; zero on the axis.
Vec3 radial_direction(const Vec3& x) {
  const double r = std::hypot(x.x, x.y);
  if (r == 0.0) return {};
  return {x.x / r, x.y / r, 0.0};
}

}  // namespace

Vec3 boundary_displacement_testA(const Vec3& x, double t, const RadialPulseLaw& law, const Compartments& comp) {
  if (x.z < comp.L_LA || x.z >= comp.L_LA + comp.L_LV) return {};
  const double zc = x.z - 0.5 * comp.total_length();
  const double amp = law.w_bar * law.amplitude(t) * std::exp(-zc * zc / (2.0 * law.sigma * law.sigma));
  return amp * radial_direction(x);
}

double volume_match_coefficient(double L_star, double V_star, double R_c) {
  const double pi = std::numbers::pi;
  const double disc = 16.0 * R_c * R_c * L_star * L_star - 2.0 * pi * L_star * (pi * L_star * R_c * R_c - V_star);
  if (disc < 0.0) throw SolverError("unreachable volume for given length");
  return -4.0 * R_c / pi + std::sqrt(disc) / (pi * L_star);
}

Vec3 boundary_displacement_testB(const Vec3& x, double t, const ShorteningLaw& law, const Compartments& comp) {
  if (x.z < comp.L_LA) return {};
  const double L_star = law.length(t);
  const double stretch = L_star - comp.L_LV;
  if (x.z >= comp.L_LA + comp.L_LV) return {0.0, 0.0, stretch};
  const double s = (x.z - comp.L_LA) / comp.L_LV;
  const double c = volume_match_coefficient(L_star, law.volume(t), comp.radius);
  const Vec3 r = radial_direction(x);
  Vec3 d{};
  if (r.x != 0.0 || r.y != 0.0) {
    const Vec3 in_plane{x.x, x.y, 0.0};
    d = (comp.radius + c * std::sin(std::numbers::pi * s)) * r - in_plane;
  }
  d.z += s * stretch;
  return d;
}

Vec3 boundary_displacement(const DisplacementLaw& law, const Vec3& x, double t, const Compartments& comp) {
  return std::visit(
      [&](const auto& l) -> Vec3 {
        using L = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<L, RadialPulseLaw>) {
          return boundary_displacement_testA(x, t, l, comp);
        } else if constexpr (std::is_same_v<L, ShorteningLaw>) {
          return boundary_displacement_testB(x, t, l, comp);
        } else {
          return Vec3{};
        }
      },
      law);
}

// ---------------------------------------------------------------------------

struct LiftingSolver::Impl {
  std::vector<int> interior_index;  // vertex -> interior row, -1 on the boundary
  Eigen::SparseMatrix<double> K_ib;  // interior x all vertices (boundary columns only)
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  int n_interior = 0;
};

LiftingSolver::LiftingSolver(const TetMesh& mesh) : impl_(std::make_unique<Impl>()) {
  boundary_ = mesh.boundary_vertex_mask();
  const int nv = static_cast<int>(mesh.num_vertices());
  impl_->interior_index.assign(nv, -1);
  int ni = 0;
  for (int v = 0; v < nv; ++v) {
    if (!boundary_[v]) impl_->interior_index[v] = ni++;
  }
  if (ni == nv) throw SolverError("lifting problem has no Dirichlet vertices");
  impl_->n_interior = ni;

  std::vector<Eigen::Triplet<double>> tii, tib;
  const auto cells = mesh.cells();
  for (std::size_t c = 0; c < cells.size(); ++c) {
    std::array<Vec3, 4> grad;
    double vol = 0.0;
    if (!barycentric_gradients(mesh.reference_cell_coordinates(c), grad, vol)) throw MeshError("degenerate cell");
    for (int a = 0; a < 4; ++a) {
      const int ia = impl_->interior_index[cells[c][a]];
      if (ia < 0) continue;
      for (int b = 0; b < 4; ++b) {
        const double k = vol * dot(grad[a], grad[b]);
        const int ib = impl_->interior_index[cells[c][b]];
        if (ib >= 0) {
          tii.emplace_back(ia, ib, k);
        } else {
          tib.emplace_back(ia, cells[c][b], k);
        }
      }
    }
  }
  Eigen::SparseMatrix<double> K_ii(ni, ni);
  K_ii.setFromTriplets(tii.begin(), tii.end());
  impl_->K_ib.resize(ni, nv);
  impl_->K_ib.setFromTriplets(tib.begin(), tib.end());
  if (ni > 0) {
    impl_->ldlt.compute(K_ii);
    if (impl_->ldlt.info() != Eigen::Success) throw SolverError("lifting factorisation failed");
  }
}

LiftingSolver::~LiftingSolver() = default;
LiftingSolver::LiftingSolver(LiftingSolver&&) noexcept = default;
LiftingSolver& LiftingSolver::operator=(LiftingSolver&&) noexcept = default;

std::vector<Vec3> LiftingSolver::solve(std::span<const Vec3> boundary_values) const {
  const int nv = static_cast<int>(boundary_.size());
  if (static_cast<int>(boundary_values.size()) != nv) throw SolverError("lifting data size does not match the mesh");
  std::vector<Vec3> d(nv);
  for (int v = 0; v < nv; ++v) {
    if (boundary_[v]) d[v] = boundary_values[v];
  }
  if (impl_->n_interior == 0) return d;
  for (int k = 0; k < 3; ++k) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(nv);
    for (int v = 0; v < nv; ++v) {
      if (boundary_[v]) g[v] = boundary_values[v][k];
    }
    const Eigen::VectorXd rhs = -(impl_->K_ib * g);
    const Eigen::VectorXd sol = impl_->ldlt.solve(rhs);
    for (int v = 0; v < nv; ++v) {
      const int i = impl_->interior_index[v];
      if (i >= 0) d[v][k] = sol[i];
    }
  }
  return d;
}

std::vector<Vec3> solve_lifting(const TetMesh& mesh, std::span<const Vec3> boundary_values) {
  return LiftingSolver(mesh).solve(boundary_values);
}

void move_mesh(TetMesh& mesh, std::span<const Vec3> displacement) {
  const auto ref = mesh.reference_vertices();
  if (displacement.size() != ref.size()) throw MeshError("displacement size does not match the mesh");
  std::vector<Vec3> x(ref.size());
  for (std::size_t v = 0; v < ref.size(); ++v) x[v] = ref[v] + displacement[v];
  mesh.set_current_vertices(std::move(x));
}

std::vector<Vec3> ale_velocity(std::span<const Vec3> d_now, std::span<const Vec3> d_prev, double dt) {
  if (!(dt > 0.0)) throw SolverError("time step must be positive");
  if (d_now.size() != d_prev.size()) throw SolverError("displacement fields differ in size");
  std::vector<Vec3> w(d_now.size());
  const double inv = 1.0 / dt;
  for (std::size_t v = 0; v < d_now.size(); ++v) w[v] = inv * (d_now[v] - d_prev[v]);
  return w;
}

}  // namespace ariis
