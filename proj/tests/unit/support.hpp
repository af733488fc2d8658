#pragma once

#include "ac1/almost_c1.hpp"

#include <memory>
#include <random>
#include <vector>

namespace ac1::testing {

inline std::shared_ptr<const QuadMesh> shared(QuadMesh m) { return std::make_shared<const QuadMesh>(std::move(m)); }

inline BuildResult build_default(const QuadMesh& mesh, const BuildOptions& opts = {}) {
  auto m = shared(mesh);
  return build_space(m, default_control_net(*m), opts);
}

// n x n midpoint grid on the unit square.
inline std::vector<Vec2> grid_points(int n) {
  std::vector<Vec2> out;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.emplace_back((i + 0.5) / n, (j + 0.5) / n);
  return out;
}

// Uniform random parameters, optionally kept away from knot lines.
inline std::vector<Vec2> random_points(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Vec2> out;
  for (int i = 0; i < n; ++i) out.emplace_back(u(rng), u(rng));
  return out;
}

// Quadratic B-spline value on an arbitrary knot vector by the Cox-de Boor recursion.
inline double cox_de_boor(const std::vector<double>& t, int i, int p, double x) {
  if (p == 0) {
    const bool last = x == t.back() && t[i] < t[i + 1] && t[i + 1] == t.back();
    return (t[i] <= x && x < t[i + 1]) || last ? 1.0 : 0.0;
  }
  double a = 0.0, b = 0.0;
  if (t[i + p] > t[i]) a = (x - t[i]) / (t[i + p] - t[i]) * cox_de_boor(t, i, p - 1, x);
  if (t[i + p + 1] > t[i + 1]) b = (t[i + p + 1] - x) / (t[i + p + 1] - t[i + 1]) * cox_de_boor(t, i + 1, p - 1, x);
  return a + b;
}

}  // namespace ac1::testing
