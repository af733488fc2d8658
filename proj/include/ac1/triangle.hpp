#pragma once

#include "ac1/common.hpp"

#include <array>
#include <optional>
#include <vector>

namespace ac1 {

enum class TriangleStrategy { MinArea, BoundaryAdapted };

// Counter-clockwise triangle in 2D tangent coordinates.
struct ControlTriangle {
  std::array<Vec2, 3> v;
  double area() const;
};

// Convex hull, counter-clockwise, without collinear vertices.
std::vector<Vec2> convex_hull(std::vector<Vec2> points);

// Smallest triangle with one side on the line through `origin` with direction
// `dir` that encloses the convex polygon `hull` (which lies to the left of the
// directed line). Exact: each free side is either flush with a hull edge or
// touches the hull at its own midpoint, so all such candidates are enumerated.
ControlTriangle min_triangle_on_line(const std::vector<Vec2>& hull, const Vec2& origin, const Vec2& dir);

// Minimal-area enclosing triangle of a point set (one side is always flush
// with a hull edge, so the line-constrained search over hull edges is exhaustive).
ControlTriangle min_area_triangle(const std::vector<Vec2>& points);

// Enclosing triangle used for an extraordinary vertex. For BoundaryAdapted,
// `base` holds two points defining the line that must carry one side.
// The result is enlarged by the factor 1 + 1e-6 so that points are strictly
// inside (for BoundaryAdapted the enlargement keeps the base line fixed).
ControlTriangle control_triangle(const std::vector<Vec2>& points, TriangleStrategy strategy,
                                 const std::optional<std::array<Vec2, 2>>& base = std::nullopt);

Eigen::Vector3d barycentric(const ControlTriangle& tri, const Vec2& p);

inline constexpr double kTriangleSlack = 1.0 + 1e-6;

}  // namespace ac1
