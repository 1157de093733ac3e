#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace ariis {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr double& operator[](std::size_t i) { return i == 0 ? x : (i == 1 ? y : z); }
  constexpr double operator[](std::size_t i) const { return i == 0 ? x : (i == 1 ? y : z); }

  constexpr Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr Vec3& operator-=(const Vec3& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  constexpr Vec3& operator*=(double s) {
    x *= s;
    y *= s;
    z *= s;
    return *this;
  }
  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

/// Signed volume of the tetrahedron (a, b, c, d); positive for right-handed ordering.
constexpr double signed_tet_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  return dot(b - a, cross(c - a, d - a)) / 6.0;
}

/// Gradients of the four barycentric coordinates of a tetrahedron (constant per cell).
/// Returns false for a degenerate cell.
inline bool barycentric_gradients(const std::array<Vec3, 4>& x, std::array<Vec3, 4>& grad, double& volume) {
  const Vec3 e1 = x[1] - x[0];
  const Vec3 e2 = x[2] - x[0];
  const Vec3 e3 = x[3] - x[0];
  const double det = dot(e1, cross(e2, e3));
  volume = det / 6.0;
  if (det == 0.0) return false;
  const double inv = 1.0 / det;
  grad[1] = cross(e2, e3) * inv;
  grad[2] = cross(e3, e1) * inv;
  grad[3] = cross(e1, e2) * inv;
  grad[0] = -(grad[1] + grad[2] + grad[3]);
  return true;
}

}  // namespace ariis
