#include "ariis/quadrature.hpp"

#include <vector>

namespace ariis {

namespace {

std::vector<TetQuadPoint> make_degree5() {
  std::vector<TetQuadPoint> pts;
  auto add_aaab = [&](double a, double w) {
    const double b = 1.0 - 3.0 * a;
    for (int k = 0; k < 4; ++k) {
      std::array<double, 4> l{a, a, a, a};
      l[k] = b;
      pts.push_back({l, w});
    }
  };
  add_aaab(0.0927352503108912264, 0.0734930431163619495);
  add_aaab(0.3108859192633006097, 0.1126879257180158507);
  const double a = 0.0455037041256496494;
  const double b = 0.5 - a;
  const double w = 0.0425460207770814664;
  const std::array<std::array<int, 2>, 6> pairs{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
  for (const auto& p : pairs) {
    std::array<double, 4> l{b, b, b, b};
    l[p[0]] = a;
    l[p[1]] = a;
    pts.push_back({l, w});
  }
  return pts;
}

}  // namespace

std::span<const TetQuadPoint> tet_quadrature(int degree) {
  static const std::vector<TetQuadPoint> centroid{{{0.25, 0.25, 0.25, 0.25}, 1.0}};
  static const std::vector<TetQuadPoint> degree2 = [] {
    const double a = 0.1381966011250105152;
    const double b = 1.0 - 3.0 * a;
    std::vector<TetQuadPoint> p;
    for (int k = 0; k < 4; ++k) {
      std::array<double, 4> l{a, a, a, a};
      l[k] = b;
      p.push_back({l, 0.25});
    }
    return p;
  }();
  static const std::vector<TetQuadPoint> degree5 = make_degree5();
  if (degree <= 1) return centroid;
  if (degree == 2) return degree2;
  return degree5;
}

}  // namespace ariis
