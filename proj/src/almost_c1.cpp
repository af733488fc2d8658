#include "ac1/almost_c1.hpp"

#include "ac1/basis.hpp"

#include <algorithm>
#include <cmath>

namespace ac1 {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool is_zero(const Eigen::Matrix4d& m) { return (m.array() == 0.0).all(); }

}  // namespace

VectorNet vector_net(const ExtractionTable& table, const std::vector<Vec3>& points, int face) {
  if (face < 0 || face >= static_cast<int>(table.faces.size()))
    throw Error(ErrorCode::FaceOutOfRange, "face " + std::to_string(face));
  VectorNet net;
  for (auto& m : net) m.setZero();
  for (const auto& e : table.faces[face].entries) {
    const Vec3& p = points[e.dof];
    for (int d = 0; d < 3; ++d) net[d] += p[d] * e.coeffs;
  }
  return net;
}

Vec3 net_point(const VectorNet& net, int j, int k) { return {net[0](j, k), net[1](j, k), net[2](j, k)}; }

std::array<Eigen::Matrix4d, 4> truncation_matrices() {
  std::array<Eigen::Matrix4d, 4> t;
  for (int m = 0; m < 4; ++m) {
    t[m].setOnes();
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        auto [j, k] = anchored_index(m, a, b, 3);
        t[m](j, k) = 0.0;
      }
  }
  return t;
}

Eigen::Matrix4d subdivide_truncate(const Eigen::Matrix3d& c, const std::array<bool, 4>& ev_flags) {
  Eigen::Matrix4d c4 = Eigen::Matrix4d::Zero();
  c4.topLeftCorner<3, 3>() = c;
  Eigen::Matrix4d out = insert_knots(c4);
  static const auto masks = truncation_matrices();
  for (int m = 0; m < 4; ++m)
    if (ev_flags[m]) out = out.cwiseProduct(masks[m]);
  return out;
}

std::vector<VectorNet> ring_nets(const QuadMesh& mesh, const ExtractionTable& star, const std::vector<Vec3>& xstar,
                                 const std::vector<RingEntry>& ring) {
  (void)mesh;
  std::vector<VectorNet> out;
  out.reserve(ring.size());
  for (const auto& r : ring) {
    VectorNet c = vector_net(star, xstar, r.face);
    for (auto& m : c) m = insert_knots(m);
    out.push_back(c);
  }
  return out;
}

Vec3 ring_block_point(const VectorNet& hat, const RingEntry& entry, int a, int b) {
  auto [j, k] = anchored_index(entry.local, a, b, 3);
  return net_point(hat, j, k);
}

Vec3 default_normal(const std::vector<RingEntry>& ring, const std::vector<VectorNet>& hat_nets) {
  Vec3 sum = Vec3::Zero();
  double scale = 0.0;
  for (size_t i = 0; i < ring.size(); ++i) {
    const Vec3 p00 = ring_block_point(hat_nets[i], ring[i], 0, 0);
    const Vec3 e1 = ring_block_point(hat_nets[i], ring[i], 1, 0) - p00;
    const Vec3 e2 = ring_block_point(hat_nets[i], ring[i], 0, 1) - p00;
    scale = std::max({scale, e1.norm(), e2.norm()});
    const Vec3 c = e1.cross(e2);
    if (c.norm() > 0.0) sum += c.normalized();
  }
  if (sum.norm() <= 1e-12 * static_cast<double>(ring.size()) || scale == 0.0)
    throw Error(ErrorCode::ZeroNormal, "averaged corner normals vanish");
  return sum.normalized();
}

TangentFrame tangent_frame(const std::vector<RingEntry>& ring, const std::vector<VectorNet>& hat_nets, const Vec3& n) {
  if (n.norm() == 0.0) throw Error(ErrorCode::ZeroNormal, "prescribed normal is zero");
  TangentFrame frame;
  frame.n = n.normalized();
  frame.origin = ring_block_point(hat_nets[0], ring[0], 0, 0);
  double scale = 0.0;
  for (size_t i = 0; i < ring.size(); ++i)
    for (int p = 1; p < 4; ++p)
      scale = std::max(scale, (ring_block_point(hat_nets[i], ring[i], kBlockA[p], kBlockB[p]) - frame.origin).norm());
  // First spoke direction, falling back to later block points if it is parallel to n.
  for (size_t i = 0; i < ring.size(); ++i)
    for (int p : {1, 2, 3}) {
      Vec3 s = ring_block_point(hat_nets[i], ring[i], kBlockA[p], kBlockB[p]) - frame.origin;
      s -= s.dot(frame.n) * frame.n;
      if (s.norm() > 1e-10 * scale && scale > 0.0) {
        frame.t1 = s.normalized();
        frame.t2 = frame.n.cross(frame.t1);
        return frame;
      }
    }
  throw Error(ErrorCode::DegenerateProjection, "projected 1-ring collapses to a point");
}

std::vector<BlockPoints> tangent_projection(const TangentFrame& frame, const std::vector<RingEntry>& ring,
                                            const std::vector<VectorNet>& hat_nets) {
  std::vector<BlockPoints> out(ring.size());
  double spread = 0.0, scale = 0.0;
  for (size_t i = 0; i < ring.size(); ++i)
    for (int p = 0; p < 4; ++p) {
      const Vec3 q = ring_block_point(hat_nets[i], ring[i], kBlockA[p], kBlockB[p]);
      out[i][p] = frame.project(q);
      spread = std::max(spread, out[i][p].norm());
      scale = std::max(scale, (q - frame.origin).norm());
    }
  if (spread <= 1e-12 * std::max(scale, 1e-300))
    throw Error(ErrorCode::DegenerateProjection, "projected 1-ring collapses to a point");
  return out;
}

BlockWeights ev_spline_coeffs(const ControlTriangle& triangle, const std::vector<BlockPoints>& points) {
  BlockWeights w(points.size());
  for (size_t i = 0; i < points.size(); ++i)
    for (int p = 0; p < 4; ++p) {
      Eigen::Vector3d l = barycentric(triangle, points[i][p]);
      for (int nu = 0; nu < 3; ++nu) {
        if (l[nu] < -1e-10) throw Error(ErrorCode::NegativeBarycentric, "control triangle misses a block point");
        if (l[nu] < 0.0) l[nu] = 0.0;
      }
      l /= l.sum();
      for (int nu = 0; nu < 3; ++nu) w[i][p][nu] = l[nu];
    }
  return w;
}

EvTemplate regular_template(int valence, bool boundary) {
  if (valence < 3) throw Error(ErrorCode::UnsupportedValence, "template needs valence >= 3");
  EvTemplate t;
  t.valence = valence;
  t.boundary = boundary;
  t.points.resize(valence);
  auto unit = [](double a) { return Vec2(std::cos(a), std::sin(a)); };
  for (int f = 0; f < valence; ++f) {
    Vec2 s0, s1;
    if (boundary) {
      s0 = unit(kPi * f / valence);
      s1 = unit(kPi * (f + 1) / valence);
    } else {
      const double theta = 2.0 * kPi * f / valence;
      s0 = unit(theta - kPi / valence);
      s1 = unit(theta + kPi / valence);
    }
    t.points[f] = {Vec2::Zero(), s0, s1, s0 + s1};
  }
  if (boundary) {
    std::vector<Vec2> all;
    for (const auto& b : t.points) all.insert(all.end(), b.begin(), b.end());
    t.triangle = control_triangle(all, TriangleStrategy::BoundaryAdapted,
                                  std::array<Vec2, 2>{t.points[0][1], t.points[valence - 1][2]});
  } else {
    // Equilateral triangle centred at the vertex with its first corner along
    // face 0, sized so that face 0's point is the midpoint towards that corner.
    const double r = 2.0 * t.points[0][3].norm();
    for (int nu = 0; nu < 3; ++nu) t.triangle.v[nu] = r * unit(2.0 * kPi * nu / 3.0);
  }
  t.weights = ev_spline_coeffs(t.triangle, t.points);
  return t;
}

std::optional<BlockWeights> stored_template_weights(int valence) {
  // Per basis function: value at each face point and at each face's spoke
  // shared with the next face of the ring.
  std::vector<std::vector<double>> face_val(3), spoke_val(3);
  const double s5 = std::sqrt(5.0);
  if (valence == 3) {
    face_val[0] = {2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0};
    spoke_val[0] = {0.5, 0.0, 0.5};
  } else if (valence == 6) {
    face_val[0] = {2.0 / 3.0, 0.5, 1.0 / 6.0, 0.0, 1.0 / 6.0, 0.5};
    spoke_val[0] = {0.5, 1.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 3.0, 0.5};
  } else if (valence == 5) {
    const double a = std::sqrt(15.0 - 6.0 * s5), b = std::sqrt(30.0 + 6.0 * s5), c = std::sqrt(30.0 - 6.0 * s5);
    face_val[0] = {2.0 / 3.0, (3.0 + s5) / 12.0, (3.0 - s5) / 12.0, (3.0 - s5) / 12.0, (3.0 + s5) / 12.0};
    spoke_val[0] = {0.5, (1.0 + s5) / 12.0, (3.0 - s5) / 6.0, (1.0 + s5) / 12.0, 0.5};
    face_val[1] = {1.0 / 6.0, (9.0 - s5 + b) / 24.0, (9.0 + s5 + c) / 24.0, (9.0 + s5 - c) / 24.0,
                   (9.0 - s5 - b) / 24.0};
    spoke_val[1] = {(3.0 + a) / 12.0, (11.0 - s5 + c) / 24.0, (3.0 + s5) / 12.0, (11.0 - s5 - c) / 24.0,
                    (3.0 - a) / 12.0};
    // The third function mirrors the second across the first corner's axis.
    face_val[2].resize(5);
    spoke_val[2].resize(5);
    for (int f = 0; f < 5; ++f) {
      face_val[2][f] = face_val[1][(5 - f) % 5];
      spoke_val[2][f] = spoke_val[1][(5 - f - 1 + 5) % 5];
    }
  } else {
    return std::nullopt;
  }
  const int mu = valence;
  if (valence != 5) {
    // Rotational symmetry: the triangle corners are mu/3 faces apart.
    const int shift = mu / 3;
    for (int nu = 1; nu < 3; ++nu) {
      face_val[nu].resize(mu);
      spoke_val[nu].resize(mu);
      for (int f = 0; f < mu; ++f) {
        face_val[nu][f] = face_val[0][((f - nu * shift) % mu + mu) % mu];
        spoke_val[nu][f] = spoke_val[0][((f - nu * shift) % mu + mu) % mu];
      }
    }
  }
  BlockWeights w(mu);
  for (int f = 0; f < mu; ++f)
    for (int nu = 0; nu < 3; ++nu) {
      w[f][0][nu] = 1.0 / 3.0;
      w[f][1][nu] = spoke_val[nu][(f + mu - 1) % mu];
      w[f][2][nu] = spoke_val[nu][f];
      w[f][3][nu] = face_val[nu][f];
    }
  return w;
}

EvTemplate ev_templates(int valence, bool boundary) {
  EvTemplate t = regular_template(valence, boundary);
  if (!boundary)
    if (auto stored = stored_template_weights(valence)) t.weights = *stored;
  return t;
}

Geometry default_control_net(const QuadMesh& mesh) {
  if (!mesh.has_positions()) throw Error(ErrorCode::InvalidArgument, "mesh has no vertex positions");
  const auto& pos = mesh.positions();
  Geometry g;
  g.dim = 2;
  for (const auto& p : pos)
    if (p.z() != 0.0) g.dim = 3;
  for (const auto& d : dof_set_star(mesh)) {
    switch (d.kind) {
      case DofKind::Face: {
        Vec3 c = Vec3::Zero();
        for (int v : mesh.face(d.entity)) c += pos[v];
        g.points.push_back(0.25 * c);
        break;
      }
      case DofKind::BoundaryEdge: {
        const auto& e = mesh.edge(d.entity);
        g.points.push_back(0.5 * (pos[e.v0] + pos[e.v1]));
        break;
      }
      default: g.points.push_back(pos[d.entity]); break;
    }
  }
  return g;
}

int dimension_formula(const QuadMesh& mesh) {
  const auto& cls = mesh.classification();
  return mesh.num_faces() + static_cast<int>(cls.boundary_edges().size()) +
         static_cast<int>(cls.corner_vertices().size()) + 3 * static_cast<int>(cls.extraordinary_vertices().size());
}

BuildResult build_space(std::shared_ptr<const QuadMesh> mesh_ptr, const Geometry& xstar, const BuildOptions& opts) {
  const QuadMesh& mesh = *mesh_ptr;
  const auto& cls = mesh.classification();
  BuildResult out;
  SplineSpace& space = out.space;
  space.mesh = mesh_ptr;
  space.mode = opts.mode;
  space.boundary_strategy = opts.boundary_strategy;
  space.star = assemble_extraction_star(mesh);
  const ExtractionTable& star = space.star;
  if (static_cast<int>(xstar.points.size()) != star.num_dofs())
    throw Error(ErrorCode::InvalidArgument, "control point count does not match the dof count");

  auto all_ev = [&](const DofId& d) {
    switch (d.kind) {
      case DofKind::Face: {
        for (int v : mesh.face(d.entity))
          if (!cls.extraordinary_vertex[v]) return false;
        return true;
      }
      case DofKind::BoundaryEdge: {
        const auto& e = mesh.edge(d.entity);
        return cls.extraordinary_vertex[e.v0] && cls.extraordinary_vertex[e.v1];
      }
      case DofKind::Corner: return static_cast<bool>(cls.extraordinary_vertex[d.entity]);
      default: return false;
    }
  };

  std::vector<int> star_to_space(star.num_dofs(), -1);
  for (int i = 0; i < star.num_dofs(); ++i) {
    if (all_ev(star.dofs[i])) {
      space.eliminated.push_back(star.dofs[i]);
      continue;
    }
    star_to_space[i] = static_cast<int>(space.table.dofs.size());
    space.table.dofs.push_back(star.dofs[i]);
    out.geometry.points.push_back(xstar.points[i]);
  }
  const std::vector<int> evs = cls.extraordinary_vertices();
  for (int v : evs)
    for (int nu = 1; nu <= 3; ++nu) space.table.dofs.push_back({DofKind::EV, v, nu});
  space.table.rebuild_index();
  out.geometry.dim = xstar.dim;

  // Extraordinary-vertex constructions.
  for (int v : evs) {
    EvData ev;
    ev.vertex = v;
    ev.valence = cls.valence[v];
    ev.boundary = cls.boundary_vertex[v];
    ev.ring = one_ring(mesh, v);
    const auto hat = ring_nets(mesh, star, xstar.points, ev.ring);
    Vec3 n;
    if (auto it = xstar.ev_normals.find(v); it != xstar.ev_normals.end()) n = it->second.normalized();
    else if (xstar.dim == 2) n = Vec3::UnitZ();
    else n = default_normal(ev.ring, hat);
    ev.frame = tangent_frame(ev.ring, hat, n);
    ev.points = tangent_projection(ev.frame, ev.ring, hat);
    if (opts.mode == SpaceMode::Geometric) {
      std::vector<Vec2> all;
      for (const auto& b : ev.points) all.insert(all.end(), b.begin(), b.end());
      std::optional<std::array<Vec2, 2>> base;
      TriangleStrategy strategy = TriangleStrategy::MinArea;
      if (ev.boundary && opts.boundary_strategy == TriangleStrategy::BoundaryAdapted) {
        strategy = TriangleStrategy::BoundaryAdapted;
        base = std::array<Vec2, 2>{ev.points.front()[1], ev.points.back()[2]};
      }
      ev.triangle = control_triangle(all, strategy, base);
      ev.weights = ev_spline_coeffs(ev.triangle, ev.points);
      for (int nu = 0; nu < 3; ++nu) ev.anchors[nu] = ev.frame.lift(ev.triangle.v[nu]);
    } else {
      const EvTemplate tpl = ev_templates(ev.valence, ev.boundary);
      ev.from_template = true;
      ev.triangle = tpl.triangle;
      ev.weights = tpl.weights;
      // Least-squares linear map from the template plane to the tangent plane.
      Eigen::Matrix2d tt = Eigen::Matrix2d::Zero(), ct = Eigen::Matrix2d::Zero();
      for (size_t i = 0; i < ev.points.size(); ++i)
        for (int p = 0; p < 4; ++p) {
          tt += tpl.points[i][p] * tpl.points[i][p].transpose();
          ct += ev.points[i][p] * tpl.points[i][p].transpose();
        }
      const Eigen::Matrix2d lin = ct * tt.inverse();
      for (int nu = 0; nu < 3; ++nu) ev.anchors[nu] = ev.frame.lift(lin * tpl.triangle.v[nu]);
    }
    out.geometry.ev_normals[v] = ev.frame.n;
    for (int nu = 0; nu < 3; ++nu) out.geometry.points.push_back(ev.anchors[nu]);
    space.evs.push_back(std::move(ev));
  }

  // Face tables.
  space.table.faces.resize(mesh.num_faces());
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const FaceRecord& src = star.faces[f];
    FaceRecord& rec = space.table.faces[f];
    if (!cls.extraordinary_face[f]) {
      rec = src;
      for (auto& e : rec.entries) e.dof = star_to_space[e.dof];
      continue;
    }
    rec.extraordinary = true;
    rec.degree_index = 3;
    std::array<bool, 4> flags{};
    for (int m = 0; m < 4; ++m) flags[m] = cls.extraordinary_vertex[mesh.face(f)[m]];
    for (const auto& e : src.entries) {
      if (star_to_space[e.dof] < 0) continue;
      FaceEntry entry;
      entry.dof = star_to_space[e.dof];
      entry.coeffs = subdivide_truncate(e.coeffs.topLeftCorner<3, 3>(), flags);
      if (!is_zero(entry.coeffs)) rec.entries.push_back(entry);
    }
    for (int m = 0; m < 4; ++m) {
      if (!flags[m]) continue;
      const int v = mesh.face(f)[m];
      const auto it = std::lower_bound(evs.begin(), evs.end(), v);
      const EvData& ev = space.evs[it - evs.begin()];
      int slot = -1;
      for (size_t i = 0; i < ev.ring.size(); ++i)
        if (ev.ring[i].face == f) slot = static_cast<int>(i);
      for (int nu = 0; nu < 3; ++nu) {
        FaceEntry entry;
        entry.dof = space.table.index_of({DofKind::EV, v, nu + 1});
        for (int p = 0; p < 4; ++p) {
          auto [j, k] = anchored_index(m, kBlockA[p], kBlockB[p], 3);
          entry.coeffs(j, k) = ev.weights[slot][p][nu];
        }
        if (!is_zero(entry.coeffs)) rec.entries.push_back(entry);
      }
    }
    std::sort(rec.entries.begin(), rec.entries.end(),
              [](const FaceEntry& a, const FaceEntry& b) { return a.dof < b.dof; });
  }
  return out;
}

}  // namespace ac1
