#include "ac1/refine.hpp"

#include "ac1/basis.hpp"
#include "ac1/evaluation.hpp"

#include <cmath>
#include <limits>
#include <map>

namespace ac1 {

namespace {

Rational sign(int k) { return (k % 2 == 0) ? Rational(1) : Rational(-1); }

}  // namespace

EvStencils ev_stencils(int mu, bool boundary) {
  if (mu < (boundary ? 2 : 3)) throw Error(ErrorCode::UnsupportedValence, "stencil valence too small");
  EvStencils st;
  st.valence = mu;
  st.boundary = boundary;
  if (!boundary) {
    std::vector<Rational> s_row(mu), q_row(mu);
    for (int k = 0; k < mu; ++k) {
      if (mu % 2 == 1) {
        s_row[k] = sign(k);
        q_row[k] = 0;
      } else {
        s_row[k] = sign(k) * Rational(2 * mu - 2 * (k + 1), mu);
        q_row[k] = sign(k) * Rational(1, mu);
      }
    }
    st.S.assign(mu, std::vector<Rational>(mu));
    st.Q.assign(mu, std::vector<Rational>(mu));
    for (int r = 0; r < mu; ++r)
      for (int s = 0; s < mu; ++s) {
        st.S[r][s] = s_row[((s - r) % mu + mu) % mu];
        st.Q[r][s] = q_row[((s - r) % mu + mu) % mu];
      }
    return st;
  }
  st.R.assign(mu, std::vector<Rational>(mu - 1));
  for (int r = 0; r < mu; ++r)
    for (int k = r; k < mu - 1; ++k) st.R[r][k] = sign(k - r) * Rational(4 * mu - 4 * (k + 1), mu);
  st.S.assign(mu, std::vector<Rational>(mu - 1));
  for (int r = 0; r < mu; ++r)
    for (int k = 0; k < mu - 1; ++k) st.S[r][k] = (st.R[r][k] + st.R[mu - 1 - r][mu - 2 - k]) * Rational(1, 2);
  st.Q.assign(mu, std::vector<Rational>(mu));
  for (int r = 0; r < mu; ++r)
    for (int s = 0; s < mu; ++s) st.Q[r][s] = sign(r + s) * Rational(1, mu);
  return st;
}

Eigen::Matrix4d refine_element_local(bool extraordinary, const Eigen::Matrix4d& c) {
  return extraordinary ? c : insert_knots(c);
}

std::vector<bool> stencil_qualifying(const QuadMesh& mesh) {
  const auto& cls = mesh.classification();
  std::vector<bool> ok(mesh.num_vertices(), false);
  for (int v : cls.extraordinary_vertices()) {
    bool alone = true;
    for (int f : mesh.vertex_faces(v))
      for (int w : mesh.face(f))
        if (w != v && cls.extraordinary_vertex[w]) alone = false;
    ok[v] = alone;
  }
  return ok;
}

Eigen::SparseMatrix<double> TransferOperator::matrix() const {
  std::vector<Eigen::Triplet<double>> trip;
  for (size_t r = 0; r < local.size(); ++r)
    for (const auto& [slot, w] : local[r]) trip.emplace_back(static_cast<int>(r), slot, w.to_double());
  Eigen::SparseMatrix<double> a(static_cast<int>(local.size()), slots_from_dofs.rows());
  a.setFromTriplets(trip.begin(), trip.end());
  return a * slots_from_dofs;
}

std::vector<Rational> TransferOperator::local_row_sums() const {
  std::vector<Rational> sums(local.size());
  for (size_t r = 0; r < local.size(); ++r)
    for (const auto& [slot, w] : local[r]) sums[r] += w;
  return sums;
}

std::vector<Vec3> TransferOperator::apply(const std::vector<Vec3>& coarse) const {
  if (static_cast<int>(coarse.size()) != slots_from_dofs.cols())
    throw Error(ErrorCode::InvalidArgument, "control point count does not match the transfer operator");
  Eigen::MatrixXd x(coarse.size(), 3);
  double scale = 1.0;
  for (size_t i = 0; i < coarse.size(); ++i) {
    x.row(i) = coarse[i].transpose();
    scale = std::max(scale, coarse[i].cwiseAbs().maxCoeff());
  }
  const Eigen::MatrixXd slots = slots_from_dofs * x;
  std::vector<Vec3> out(local.size(), Vec3::Zero());
  for (size_t r = 0; r < local.size(); ++r)
    for (const auto& [slot, w] : local[r]) out[r] += w.to_double() * slots.row(slot).transpose();
  for (const auto& [row, slot] : consistency)
    if ((out[row] - slots.row(slot).transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
      throw Error(ErrorCode::AmbiguousAssignment, "refined dof " + rows[row].str() + " receives conflicting values");
  return out;
}

TransferOperator build_transfer(const SplineSpace& space, const QuadMesh& fine, const RefinementMap& map) {
  const QuadMesh& mesh = space.topo();
  const auto& cls = mesh.classification();
  TransferOperator op;
  op.rows = dof_set_star(fine);
  op.local.resize(op.rows.size());

  std::vector<Eigen::Triplet<double>> trip;
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const FaceRecord& rec = space.table.faces[f];
    for (const auto& e : rec.entries) {
      const Eigen::Matrix4d m = refine_element_local(rec.extraordinary, e.coeffs);
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
          if (m(j, k) != 0.0) trip.emplace_back(slot_index(f, j, k), e.dof, m(j, k));
    }
  }
  op.slots_from_dofs.resize(16 * mesh.num_faces(), space.num_dofs());
  op.slots_from_dofs.setFromTriplets(trip.begin(), trip.end());

  op.stencil_vertices = stencil_qualifying(mesh);
  std::map<int, EvStencils> stencils;
  std::map<int, std::vector<RingEntry>> rings;
  auto slot_at = [](int face, int m, int a, int b) {
    auto [j, k] = anchored_index(m, a, b, 3);
    return slot_index(face, j, k);
  };

  for (size_t row = 0; row < op.rows.size(); ++row) {
    const DofId& d = op.rows[row];
    auto& out = op.local[row];
    switch (d.kind) {
      case DofKind::Corner: {
        bool first = true;
        for (int f : mesh.vertex_faces(d.entity)) {
          const int slot = slot_at(f, mesh.local_index(f, d.entity), 0, 0);
          if (first) out.emplace_back(slot, Rational(1));
          else op.consistency.emplace_back(static_cast<int>(row), slot);
          first = false;
        }
        break;
      }
      case DofKind::BoundaryEdge: {
        const auto& pe = map.parent_edge[d.entity];
        if (!pe) throw Error(ErrorCode::InvalidArgument, "refined boundary edge without parent");
        const auto& e = mesh.edge(pe->edge);
        out.emplace_back(slot_at(e.faces[0], e.local[0], 1 + pe->half, 0), Rational(1));
        break;
      }
      case DofKind::Face: {
        const auto [f, m] = map.parent_face[d.entity];
        const int v = mesh.face(f)[m];
        if (!op.stencil_vertices[v]) {
          out.emplace_back(slot_at(f, m, 1, 1), Rational(1));
          break;
        }
        const bool boundary = cls.boundary_vertex[v];
        const int mu = cls.valence[v];
        auto sit = stencils.find(v);
        if (sit == stencils.end()) {
          sit = stencils.emplace(v, ev_stencils(mu, boundary)).first;
          rings.emplace(v, one_ring(mesh, v));
        }
        const auto& st = sit->second;
        const auto& ring = rings[v];
        int r = 0;
        while (ring[r].face != f) ++r;
        const int spokes = boundary ? mu - 1 : mu;
        for (int s = 0; s < spokes; ++s)
          if (!st.S[r][s].is_zero()) out.emplace_back(slot_at(ring[s].face, ring[s].local, 0, 1), st.S[r][s]);
        for (int s = 0; s < mu; ++s)
          if (!st.Q[r][s].is_zero()) out.emplace_back(slot_at(ring[s].face, ring[s].local, 1, 1), st.Q[r][s]);
        break;
      }
      case DofKind::EV: break;
    }
  }
  return op;
}

std::vector<Vec3> transfer_control_points(const SplineSpace& space, const QuadMesh& fine, const RefinementMap& map,
                                          const std::vector<Vec3>& coarse) {
  return build_transfer(space, fine, map).apply(coarse);
}

RefineResult refine_geometry(const SplineSpace& space, const Geometry& geometry) {
  auto [fine, map] = refine_topology(space.topo());
  RefineResult res;
  res.transfer = build_transfer(space, fine, map);
  res.map = std::move(map);
  res.xstar.dim = geometry.dim;
  res.xstar.points = res.transfer.apply(geometry.points);
  res.xstar.ev_normals = geometry.ev_normals;
  res.mesh = std::make_shared<const QuadMesh>(std::move(fine));
  BuildOptions opts;
  opts.mode = space.mode;
  opts.boundary_strategy = space.boundary_strategy;
  res.built = build_space(res.mesh, res.xstar, opts);

  const auto& table = res.built.space.table;
  const auto& star = res.built.space.star;
  for (int f = 0; f < res.mesh->num_faces(); ++f) {
    const VectorNet a = vector_net(table, res.built.geometry.points, f);
    VectorNet b = vector_net(star, res.xstar.points, f);
    if (table.faces[f].extraordinary)
      for (auto& m : b) m = insert_knots(m);
    for (int d = 0; d < 3; ++d) res.transfer_gap = std::max(res.transfer_gap, (a[d] - b[d]).cwiseAbs().maxCoeff());
  }
  return res;
}

RefineResult refine_levels(const SplineSpace& space, const Geometry& geometry, int levels) {
  if (levels < 1) throw Error(ErrorCode::InvalidArgument, "refine_levels needs levels >= 1");
  RefineResult res = refine_geometry(space, geometry);
  for (int l = 1; l < levels; ++l) res = refine_geometry(res.built.space, res.built.geometry);
  return res;
}

LimitCheck limit_check(const SplineSpace& space, const Geometry& geometry, int levels, int samples) {
  if (levels < 1) throw Error(ErrorCode::InvalidArgument, "limit_check needs levels >= 1");
  struct Probe {
    int face;
    Vec2 xi;
  };
  std::vector<Probe> probes;
  const int m = std::max(samples, 2);
  for (int f = 0; f < space.topo().num_faces(); ++f)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) probes.push_back({f, Vec2(double(i) / (m - 1), double(j) / (m - 1))});

  auto sample = [&](const SplineSpace& s, const Geometry& g) {
    std::vector<Vec3> out;
    out.reserve(probes.size());
    for (const auto& p : probes) out.push_back(eval_geometry(s.table, g.points, p.face, p.xi).x);
    return out;
  };

  LimitCheck lc;
  std::vector<Vec3> prev = sample(space, geometry);
  const SplineSpace* cur_space = &space;
  const Geometry* cur_geom = &geometry;
  RefineResult res;
  for (int l = 0; l < levels; ++l) {
    res = refine_geometry(*cur_space, *cur_geom);
    for (auto& p : probes) {
      int child = 0;
      Vec2 st;
      for (child = 0; child < 4; ++child) {
        st = to_anchored_param(child, p.xi);
        if (st.x() <= 0.5 && st.y() <= 0.5) break;
      }
      p.face = child_face(p.face, child);
      p.xi = (2.0 * st).cwiseMin(1.0).cwiseMax(0.0);
    }
    std::vector<Vec3> next = sample(res.built.space, res.built.geometry);
    double d = 0.0;
    for (size_t i = 0; i < next.size(); ++i) d = std::max(d, (next[i] - prev[i]).norm());
    lc.differences.push_back(d);
    prev = std::move(next);
    cur_space = &res.built.space;
    cur_geom = &res.built.geometry;
  }
  for (size_t i = 0; i + 1 < lc.differences.size(); ++i)
    lc.ratios.push_back(lc.differences[i] > 0.0 ? lc.differences[i + 1] / lc.differences[i]
                                               : std::numeric_limits<double>::quiet_NaN());
  return lc;
}

}  // namespace ac1
