#include "ac1/evaluation.hpp"
#include "ac1/refine.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace ac1;
using ac1::testing::build_default;

namespace {

// Fine face and parameter carrying the point xi of coarse face f after one refinement.
std::pair<int, Vec2> child_location(const QuadMesh& coarse, const QuadMesh& fine, int f, const Vec2& xi) {
  for (int m = 0; m < 4; ++m) {
    const Vec2 st = to_anchored_param(m, xi);
    if (st.x() <= 0.5 + 1e-15 && st.y() <= 0.5 + 1e-15) {
      const int child = child_face(f, m);
      const int lm = fine.local_index(child, coarse.face(f)[m]);
      return {child, anchored_param(lm, 2.0 * st.x(), 2.0 * st.y())};
    }
  }
  return {-1, xi};
}

Vec3 eval_at(const BuildResult& b, int f, const Vec2& xi) {
  return eval_geometry(b.space.table, b.geometry.points, f, xi).x;
}

QuadMesh lifted_disk(int mu) {
  const QuadMesh base = disk_mesh(mu);
  auto pos = base.positions();
  for (auto& p : pos) p.z() = 0.3 * (p.x() * p.x() - 0.5 * p.y() * p.y()) + 0.1 * p.x();
  return build_mesh(base.num_vertices(), base.faces(), {}, pos);
}

}  // namespace

TEST(Refine, ValenceFourStencilIsUniformSubdivision) {
  // Coarse face points F around a regular vertex; the fine face point next to the
  // vertex in face r is (9 F_r + 3 F_{r-1} + 3 F_{r+1} + F_{r+2}) / 16.
  const EvStencils st = ev_stencils(4, false);
  const Rational f[4] = {Rational(3), Rational(-7), Rational(2), Rational(5)};
  const Rational b00 = (f[0] + f[1] + f[2] + f[3]) * Rational(1, 4);
  Rational e[4], d[4];
  for (int s = 0; s < 4; ++s) {
    const Rational next = (f[s] + f[(s + 1) % 4]) * Rational(1, 2);
    const Rational prev = (f[s] + f[(s + 3) % 4]) * Rational(1, 2);
    e[s] = (b00 + next) * Rational(1, 2);
    d[s] = (b00 + next + prev + f[s]) * Rational(1, 4);
  }
  for (int r = 0; r < 4; ++r) {
    Rational y;
    for (int s = 0; s < 4; ++s) y += st.S[r][s] * e[s] + st.Q[r][s] * d[s];
    const Rational expect = (Rational(9) * f[r] + Rational(3) * f[(r + 3) % 4] + Rational(3) * f[(r + 1) % 4] +
                             f[(r + 2) % 4]) * Rational(1, 16);
    EXPECT_EQ(y, expect) << r;
  }
}

TEST(Refine, StencilMidpointRelation) {
  for (int mu : {3, 5, 6, 7, 8}) {
    const EvStencils st = ev_stencils(mu, false);
    // For even valence the spoke data must have zero alternating sum.
    std::vector<Rational> e(mu);
    for (int s = 0; s < mu; ++s) e[s] = Rational(s * s - 3 * s + 1);
    if (mu % 2 == 0) {
      Rational alt;
      for (int s = 0; s < mu; ++s) alt += (s % 2 ? -e[s] : e[s]);
      e[0] -= alt;
    }
    for (int r = 0; r < mu; ++r) {
      Rational sum;
      for (int s = 0; s < mu; ++s) sum += (st.S[r][s] + st.S[(r + 1) % mu][s]) * e[s];
      EXPECT_EQ(sum, Rational(2) * e[r]) << mu << ' ' << r;
      // Q contributes alternating rows, which cancel in the pair sum.
      for (int s = 0; s < mu; ++s) EXPECT_EQ(st.Q[r][s] + st.Q[(r + 1) % mu][s], Rational(0));
    }
  }
}

TEST(Refine, StencilRowsAreAffine) {
  for (int mu : {3, 4, 5, 6, 7}) {
    const EvStencils st = ev_stencils(mu, false);
    for (int r = 0; r < mu; ++r) {
      Rational sum;
      for (const auto& v : st.S[r]) sum += v;
      for (const auto& v : st.Q[r]) sum += v;
      EXPECT_EQ(sum, Rational(1));
    }
  }
}

TEST(Refine, BoundaryStencilIsReflectionSymmetric) {
  for (int mu : {3, 4, 5}) {
    const EvStencils st = ev_stencils(mu, true);
    ASSERT_EQ(static_cast<int>(st.S.size()), mu);
    ASSERT_EQ(static_cast<int>(st.S[0].size()), mu - 1);
    for (int r = 0; r < mu; ++r)
      for (int k = 0; k < mu - 1; ++k) EXPECT_EQ(st.S[r][k], st.S[mu - 1 - r][mu - 2 - k]);
  }
}

TEST(Refine, TransferRowsSumToOneExactly) {
  for (const QuadMesh& m : {disk_mesh(3), disk_mesh(5), disk_mesh(6), disk_mesh(7), mixed_mesh()}) {
    const BuildResult b = build_default(m);
    const RefineResult r = refine_geometry(b.space, b.geometry);
    for (const Rational& s : r.transfer.local_row_sums()) EXPECT_EQ(s, Rational(1));
  }
}

TEST(Refine, DofCountsFollowClosedForm) {
  for (int mu : {3, 5, 6, 7}) {
    BuildResult b = build_default(disk_mesh(mu));
    for (int i = 0; i < 3; ++i) {
      b = refine_geometry(b.space, b.geometry).built;
      const int side = (1 << (i + 1)) + 1;
      EXPECT_EQ(b.space.num_dofs(), mu * side * side + 3);
      EXPECT_EQ(b.space.num_dofs(), dimension_formula(b.space.topo()));
    }
  }
}

TEST(Refine, RefinedCoefficientsMatchTransfer) {
  for (const QuadMesh& m : {disk_mesh(5), disk_mesh(6), lifted_disk(7), mixed_mesh()}) {
    const BuildResult b = build_default(m);
    const RefineResult r = refine_geometry(b.space, b.geometry);
    EXPECT_LT(r.transfer_gap, 1e-12);
  }
}

TEST(Refine, RigidMotionEquivariance) {
  const QuadMesh m = lifted_disk(5);
  const Eigen::Matrix3d rot = Eigen::AngleAxisd(0.7, Vec3(1, 2, 3).normalized()).toRotationMatrix();
  const Vec3 shift(0.4, -1.3, 2.0);
  std::vector<Vec3> pos = m.positions();
  for (auto& p : pos) p = rot * p + shift;
  const QuadMesh moved = build_mesh(m.num_vertices(), m.faces(), {}, pos);
  const BuildResult a = build_default(m), b = build_default(moved);
  const RefineResult ra = refine_geometry(a.space, a.geometry), rb = refine_geometry(b.space, b.geometry);
  ASSERT_EQ(ra.built.geometry.points.size(), rb.built.geometry.points.size());
  for (size_t i = 0; i < ra.built.geometry.points.size(); ++i)
    EXPECT_LT((rot * ra.built.geometry.points[i] + shift - rb.built.geometry.points[i]).norm(), 1e-12);
}

TEST(Refine, BoundaryCurvesPreserved) {
  for (const QuadMesh& m : {disk_mesh(5), mixed_mesh()}) {
    const BuildResult b = build_default(m);
    const RefineResult r = refine_geometry(b.space, b.geometry);
    const QuadMesh& fine = *r.mesh;
    for (int e : m.classification().boundary_edges()) {
      const int f = m.edge(e).faces[0], loc = m.edge(e).local[0];
      for (int i = 0; i < 50; ++i) {
        const Vec2 xi = edge_param(loc, (i + 0.5) / 50.0);
        const auto [cf, cxi] = child_location(m, fine, f, xi);
        EXPECT_LT((eval_at(b, f, xi) - eval_at(r.built, cf, cxi)).norm(), 1e-13);
      }
    }
  }
}

TEST(Refine, StructuredFacesPreserved) {
  for (const QuadMesh& m : {grid_mesh(3, 3), mixed_mesh()}) {
    const BuildResult b = build_default(m);
    const RefineResult r = refine_geometry(b.space, b.geometry);
    const auto& cls = m.classification();
    for (int f = 0; f < m.num_faces(); ++f) {
      if (cls.extraordinary_face[f]) continue;
      for (const Vec2& xi : ac1::testing::grid_points(5)) {
        const auto [cf, cxi] = child_location(m, *r.mesh, f, xi);
        EXPECT_LT((eval_at(b, f, xi) - eval_at(r.built, cf, cxi)).norm(), 1e-13);
      }
    }
  }
}

TEST(Refine, SpokeMidpointsInterpolated) {
  for (const QuadMesh& m : {disk_mesh(3), disk_mesh(5), disk_mesh(6), disk_mesh(7), lifted_disk(5)}) {
    const BuildResult b = build_default(m);
    const RefineResult r = refine_geometry(b.space, b.geometry);
    const auto& cls = m.classification();
    for (int e : cls.spoke_edges()) {
      const int f = m.edge(e).faces[0], loc = m.edge(e).local[0];
      const Vec2 xi = edge_param(loc, 0.5);
      const auto [cf, cxi] = child_location(m, *r.mesh, f, xi);
      EXPECT_LT((eval_at(b, f, xi) - eval_at(r.built, cf, cxi)).norm(), 1e-12);
    }
  }
}

TEST(Refine, EvNormalsCarriedOver) {
  const BuildResult b = build_default(lifted_disk(5));
  BuildResult cur = b;
  for (int i = 0; i < 3; ++i) {
    cur = refine_geometry(cur.space, cur.geometry).built;
    for (const auto& [v, n] : b.geometry.ev_normals) EXPECT_LT((cur.geometry.ev_normals.at(v) - n).norm(), 1e-10);
  }
}

TEST(Refine, EvPositionFixed) {
  // The surface point at an extraordinary vertex does not move under refinement.
  const BuildResult b = build_default(lifted_disk(7));
  const RefineResult r = refine_geometry(b.space, b.geometry);
  const int f = b.space.topo().vertex_faces(0).front();
  const Vec3 p0 = eval_at(b, f, anchored_param(b.space.topo().local_index(f, 0), 0, 0));
  const int g = r.mesh->vertex_faces(0).front();
  const Vec3 p1 = eval_at(r.built, g, anchored_param(r.mesh->local_index(g, 0), 0, 0));
  EXPECT_LT((p0 - p1).norm(), 1e-12);
}

TEST(Refine, LimitCheckZeroOnGrid) {
  const BuildResult b = build_default(grid_mesh(3, 2));
  const LimitCheck lc = limit_check(b.space, b.geometry, 3);
  for (double d : lc.differences) EXPECT_LT(d, 1e-13);
}

TEST(Refine, LimitCheckDecaysOnCurvedDisk) {
  const BuildResult b = build_default(lifted_disk(5));
  const LimitCheck lc = limit_check(b.space, b.geometry, 5);
  ASSERT_EQ(lc.differences.size(), 5u);
  EXPECT_GT(lc.differences[0], 1e-3);  // the first refinement does move the surface
  // Each step shrinks by 0.8 unless the difference is already at round-off.
  for (size_t l = 2; l + 1 < lc.differences.size(); ++l)
    EXPECT_TRUE(lc.differences[l + 1] < 0.8 * lc.differences[l] || lc.differences[l + 1] < 1e-13) << l;
}

TEST(Refine, ElementLocalKnotInsertion) {
  Eigen::Matrix4d c = Eigen::Matrix4d::Zero();
  c.topLeftCorner<3, 3>().setOnes();
  EXPECT_TRUE(refine_element_local(false, c).isApprox(Eigen::Matrix4d::Ones()));
  EXPECT_TRUE(refine_element_local(true, Eigen::Matrix4d::Identity()).isApprox(Eigen::Matrix4d::Identity()));
}
