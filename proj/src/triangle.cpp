#include "ac1/triangle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ac1 {

namespace {

double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

double scale_of(const std::vector<Vec2>& pts) {
  double s = 0.0;
  for (const auto& p : pts) s = std::max(s, p.cwiseAbs().maxCoeff());
  return s > 0.0 ? s : 1.0;
}

struct Side {
  Vec2 n;    // outward unit normal
  double h;  // line: n . q = h
};

std::optional<Vec2> intersect(const Side& a, const Side& b) {
  Eigen::Matrix2d m;
  m << a.n.x(), a.n.y(), b.n.x(), b.n.y();
  const double det = m.determinant();
  if (std::abs(det) < 1e-14) return std::nullopt;
  return Vec2(m.inverse() * Vec2(a.h, b.h));
}

struct Candidate {
  double area = std::numeric_limits<double>::infinity();
  ControlTriangle tri;
};

// Triangle bounded by y = 0 and two side lines; hull lies in y >= 0.
void consider(const Side& left, const Side& right, Candidate& best) {
  if (left.n.x() >= 0.0 || right.n.x() <= 0.0) return;
  const Vec2 b1(left.h / left.n.x(), 0.0), b2(right.h / right.n.x(), 0.0);
  auto apex = intersect(left, right);
  if (!apex || apex->y() <= 0.0 || b1.x() >= b2.x()) return;
  const double area = 0.5 * (b2.x() - b1.x()) * apex->y();
  if (area < best.area) {
    best.area = area;
    best.tri.v = {b1, b2, *apex};
  }
}

bool supports(const std::vector<Vec2>& hull, const Side& s, double tol) {
  for (const auto& q : hull)
    if (q.dot(s.n) > s.h + tol) return false;
  return true;
}

// Side through p such that p is the midpoint of its segment between the base
// line y = 0 and the fixed side `other`.
std::optional<Side> midpoint_side(const Vec2& p, const Side& other, const std::vector<Vec2>& hull,
                                  bool want_positive_x, double tol) {
  if (p.y() <= tol || std::abs(other.n.x()) < 1e-14) return std::nullopt;
  const double t = (other.n.x() * 2.0 * p.x() + other.n.y() * 2.0 * p.y() - other.h) / other.n.x();
  const Vec2 q2(t, 0.0), q1 = 2.0 * p - q2;
  const Vec2 d = q1 - q2;
  if (d.norm() < 1e-14) return std::nullopt;
  Vec2 n(d.y(), -d.x());
  n.normalize();
  if ((n.x() > 0.0) != want_positive_x) n = -n;
  Side s{n, p.dot(n)};
  if (!supports(hull, s, tol)) return std::nullopt;
  return s;
}

// Hull points are expressed in a frame where the base is y = 0.
Candidate solve_on_base(const std::vector<Vec2>& pts, double tol) {
  const int h = static_cast<int>(pts.size());
  std::vector<Side> edges;
  for (int i = 0; i < h; ++i) {
    const Vec2 d = pts[(i + 1) % h] - pts[i];
    if (d.norm() < 1e-15) continue;
    Vec2 n(d.y(), -d.x());
    n.normalize();
    edges.push_back({n, pts[i].dot(n)});
  }
  Candidate best;
  for (const auto& l : edges) {
    if (l.n.x() >= -1e-14) continue;
    for (const auto& r : edges)
      if (r.n.x() > 1e-14) consider(l, r, best);
    for (const auto& p : pts)
      if (auto r = midpoint_side(p, l, pts, true, tol)) consider(l, *r, best);
  }
  for (const auto& r : edges) {
    if (r.n.x() <= 1e-14) continue;
    for (const auto& p : pts)
      if (auto l = midpoint_side(p, r, pts, false, tol)) consider(*l, r, best);
  }
  return best;
}

ControlTriangle scaled(const ControlTriangle& t, const Vec2& center, double factor) {
  ControlTriangle out;
  for (int i = 0; i < 3; ++i) out.v[i] = center + factor * (t.v[i] - center);
  return out;
}

ControlTriangle ccw(ControlTriangle t) {
  if (cross(t.v[1] - t.v[0], t.v[2] - t.v[0]) < 0.0) std::swap(t.v[1], t.v[2]);
  return t;
}

}  // namespace

double ControlTriangle::area() const { return 0.5 * std::abs(cross(v[1] - v[0], v[2] - v[0])); }

std::vector<Vec2> convex_hull(std::vector<Vec2> points) {
  std::sort(points.begin(), points.end(),
            [](const Vec2& a, const Vec2& b) { return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y()); });
  const double tol = 1e-13 * scale_of(points) * scale_of(points);
  const int n = static_cast<int>(points.size());
  if (n < 3) return points;
  std::vector<Vec2> hull(2 * n);
  int k = 0;
  for (int i = 0; i < n; ++i) {
    while (k >= 2 && cross(hull[k - 1] - hull[k - 2], points[i] - hull[k - 2]) <= tol) --k;
    hull[k++] = points[i];
  }
  for (int i = n - 2, t = k + 1; i >= 0; --i) {
    while (k >= t && cross(hull[k - 1] - hull[k - 2], points[i] - hull[k - 2]) <= tol) --k;
    hull[k++] = points[i];
  }
  hull.resize(k - 1);
  return hull;
}

ControlTriangle min_triangle_on_line(const std::vector<Vec2>& hull, const Vec2& origin, const Vec2& dir) {
  const Vec2 d = dir.normalized();
  const Vec2 nrm(-d.y(), d.x());
  std::vector<Vec2> local;
  local.reserve(hull.size());
  for (const auto& p : hull) local.emplace_back((p - origin).dot(d), (p - origin).dot(nrm));
  const double tol = 1e-12 * scale_of(local);
  Candidate best = solve_on_base(local, tol);
  if (!std::isfinite(best.area))
    throw Error(ErrorCode::CollinearPoints, "no enclosing triangle with the requested base line");
  ControlTriangle out;
  for (int i = 0; i < 3; ++i) out.v[i] = origin + best.tri.v[i].x() * d + best.tri.v[i].y() * nrm;
  return ccw(out);
}

ControlTriangle min_area_triangle(const std::vector<Vec2>& points) {
  const std::vector<Vec2> hull = convex_hull(points);
  if (hull.size() < 3) throw Error(ErrorCode::CollinearPoints, "points are collinear");
  ControlTriangle best;
  double best_area = std::numeric_limits<double>::infinity();
  const int h = static_cast<int>(hull.size());
  for (int i = 0; i < h; ++i) {
    const Vec2 d = hull[(i + 1) % h] - hull[i];
    ControlTriangle t = min_triangle_on_line(hull, hull[i], d);
    // Strict improvement keeps the first hull edge on ties, which is deterministic.
    if (t.area() < best_area * (1.0 - 1e-13)) {
      best_area = t.area();
      best = t;
    }
  }
  return best;
}

ControlTriangle control_triangle(const std::vector<Vec2>& points, TriangleStrategy strategy,
                                 const std::optional<std::array<Vec2, 2>>& base) {
  if (points.size() < 3) throw Error(ErrorCode::CollinearPoints, "fewer than three points");
  if (strategy == TriangleStrategy::MinArea || !base) {
    ControlTriangle t = min_area_triangle(points);
    const Vec2 c = (t.v[0] + t.v[1] + t.v[2]) / 3.0;
    return scaled(t, c, kTriangleSlack);
  }
  const Vec2 a = (*base)[0], b = (*base)[1];
  Vec2 d = b - a;
  const double scale = scale_of(points);
  if (d.norm() < 1e-14 * scale) throw Error(ErrorCode::CollinearPoints, "base line is degenerate");
  d.normalize();
  double lo = 0.0, hi = 0.0;
  for (const auto& p : points) {
    const double s = cross(d, p - a);
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  const double tol = 1e-10 * scale;
  if (lo < -tol && hi > tol)
    throw Error(ErrorCode::InvalidBoundaryConfiguration, "points lie on both sides of the boundary line");
  if (hi <= tol) d = -d;
  const std::vector<Vec2> hull = convex_hull(points);
  if (hull.size() < 3) throw Error(ErrorCode::CollinearPoints, "points are collinear");
  ControlTriangle t = min_triangle_on_line(hull, a, d);
  // Enlarge about the midpoint of the side lying on the base line.
  Vec2 center = Vec2::Zero();
  int on_line = 0;
  for (const auto& v : t.v)
    if (std::abs(cross(d, v - a)) <= 1e-9 * scale) {
      center += v;
      ++on_line;
    }
  if (on_line == 2) center /= 2.0;
  else center = a;
  ControlTriangle out = scaled(t, center, kTriangleSlack);
  // Snap base vertices back onto the line to remove rounding drift.
  for (auto& v : out.v) {
    const double s = cross(d, v - a);
    if (std::abs(s) <= 1e-9 * scale) v -= s * Vec2(-d.y(), d.x());
  }
  return out;
}

Eigen::Vector3d barycentric(const ControlTriangle& tri, const Vec2& p) {
  Eigen::Matrix2d m;
  m.col(0) = tri.v[0] - tri.v[2];
  m.col(1) = tri.v[1] - tri.v[2];
  const double det = m.determinant();
  const double scale = std::max({(tri.v[0] - tri.v[2]).squaredNorm(), (tri.v[1] - tri.v[2]).squaredNorm(), 1e-300});
  if (std::abs(det) <= 1e-14 * scale) throw Error(ErrorCode::DegenerateTriangle, "zero-area triangle");
  const Vec2 l = m.inverse() * (p - tri.v[2]);
  return {l.x(), l.y(), 1.0 - l.x() - l.y()};
}

}  // namespace ac1
