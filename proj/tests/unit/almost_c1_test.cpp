#include "ac1/almost_c1.hpp"
#include "ac1/evaluation.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace ac1;
using ac1::testing::build_default;

namespace {

std::vector<QuadMesh> fixtures() { return {disk_mesh(3), disk_mesh(5), disk_mesh(6), disk_mesh(7), mixed_mesh()}; }

// Value and parametric gradient of one dof on one face (zero when inactive).
std::pair<double, Vec2> dof_eval(const ExtractionTable& t, int dof, int face, const Vec2& xi) {
  const BasisEval b = eval_basis(t, face, xi);
  for (size_t i = 0; i < b.dofs.size(); ++i)
    if (b.dofs[i] == dof) return {b.value[i], b.grad[i]};
  return {0.0, Vec2::Zero()};
}

// Literal template coefficients: face point (1,1) and the spoke coefficient
// shared with the next face of the ring, for the first EV spline.
struct Literal {
  int valence;
  std::vector<double> face, spoke;
};

}  // namespace

TEST(AlmostC1, DimensionFormula) {
  for (const QuadMesh& m : fixtures()) {
    const BuildResult b = build_default(m);
    EXPECT_EQ(b.space.num_dofs(), dimension_formula(m));
    EXPECT_TRUE(b.space.eliminated.empty());
    EXPECT_EQ(b.space.evs.size(), m.classification().extraordinary_vertices().size());
  }
}

TEST(AlmostC1, PartitionOfUnityAndNonNegativity) {
  for (const QuadMesh& m : fixtures()) {
    const BuildResult b = build_default(m);
    for (int f = 0; f < m.num_faces(); ++f) {
      const FaceRecord& rec = b.space.table.faces[f];
      Eigen::Matrix4d sum = Eigen::Matrix4d::Zero();
      for (const auto& e : rec.entries) {
        EXPECT_GE(e.coeffs.minCoeff(), 0.0);
        sum += e.coeffs;
      }
      const int n = rec.degree_index + 1;
      EXPECT_LT((sum.topLeftCorner(n, n).array() - 1.0).abs().maxCoeff(), 1e-14);
    }
  }
}

TEST(AlmostC1, FaceSplinesVanishOnBoundary) {
  const BuildResult b = build_default(mixed_mesh());
  const QuadMesh& m = b.space.topo();
  for (int e : m.classification().boundary_edges()) {
    const int f = m.edge(e).faces[0], loc = m.edge(e).local[0];
    for (int i = 0; i <= 10; ++i) {
      const BasisEval be = eval_basis(b.space.table, f, edge_param(loc, i / 10.0));
      for (size_t k = 0; k < be.dofs.size(); ++k)
        if (b.space.table.dofs[be.dofs[k]].kind == DofKind::Face) EXPECT_EQ(be.value[k], 0.0);
    }
  }
}

TEST(AlmostC1, C1AcrossRegularEdgesC0AcrossSpokes) {
  for (const QuadMesh& mesh : {disk_mesh(5), mixed_mesh()}) {
    const BuildResult b = build_default(mesh);
    const auto& t = b.space.table;
    const auto& cls = mesh.classification();
    for (int e = 0; e < mesh.num_edges(); ++e) {
      const MeshEdge& ed = mesh.edge(e);
      if (ed.num_faces != 2) continue;
      for (int d = 0; d < t.num_dofs(); ++d)
        for (int i = 0; i <= 8; ++i) {
          const double s = i / 8.0;
          const auto [v0, g0] = dof_eval(t, d, ed.faces[0], edge_param(ed.local[0], s));
          const auto [v1, g1] = dof_eval(t, d, ed.faces[1], edge_param(ed.local[1], 1.0 - s));
          EXPECT_NEAR(v0, v1, 1e-12);
          if (!cls.spoke_edge[e])
            EXPECT_NEAR(g0.dot(edge_inward(ed.local[0])), -g1.dot(edge_inward(ed.local[1])), 1e-10);
        }
    }
  }
}

TEST(AlmostC1, TruncatedSplinesVanishAtEv) {
  for (const QuadMesh& mesh : fixtures()) {
    const BuildResult b = build_default(mesh);
    for (const EvData& ev : b.space.evs)
      for (const RingEntry& r : ev.ring) {
        const BasisEval be = eval_basis(b.space.table, r.face, anchored_param(r.local, 0, 0));
        double ev_sum = 0.0;
        for (size_t k = 0; k < be.dofs.size(); ++k) {
          if (b.space.table.dofs[be.dofs[k]].kind == DofKind::EV) {
            ev_sum += be.value[k];
            continue;
          }
          EXPECT_EQ(be.value[k], 0.0);
          EXPECT_EQ(be.grad[k].norm(), 0.0);
        }
        EXPECT_NEAR(ev_sum, 1.0, 1e-14);
      }
  }
}

TEST(AlmostC1, EvCoefficientCloudsAreAffine) {
  for (const QuadMesh& mesh : fixtures()) {
    const BuildResult b = build_default(mesh);
    for (const EvData& ev : b.space.evs) {
      // Fit value = a + b.x + c.y over all block points; exact for an affine cloud.
      const int rows = 4 * ev.valence;
      Eigen::MatrixXd a(rows, 3);
      Eigen::MatrixXd y(rows, 3);
      for (int f = 0; f < ev.valence; ++f)
        for (int p = 0; p < 4; ++p) {
          a.row(4 * f + p) << 1.0, ev.points[f][p].x(), ev.points[f][p].y();
          for (int nu = 0; nu < 3; ++nu) y(4 * f + p, nu) = ev.weights[f][p][nu];
        }
      const Eigen::MatrixXd coef = a.colPivHouseholderQr().solve(y);
      EXPECT_LT((a * coef - y).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(AlmostC1, GeometryBlockPointsInTangentPlane) {
  QuadMesh base = disk_mesh(5);
  auto pos = base.positions();
  for (auto& p : pos) p.z() = 0.2 * p.x() * p.x() - 0.3 * p.x() * p.y();
  const QuadMesh lifted = build_mesh(base.num_vertices(), base.faces(), {}, pos);
  const BuildResult b = build_default(lifted);
  ASSERT_EQ(b.geometry.dim, 3);
  for (const EvData& ev : b.space.evs) {
    const Vec3 n = b.geometry.ev_normals.at(ev.vertex);
    for (const RingEntry& r : ev.ring) {
      const VectorNet net = vector_net(b.space.table, b.geometry.points, r.face);
      const Vec3 origin = ring_block_point(net, r, 0, 0);
      for (int p = 1; p < 4; ++p)
        EXPECT_NEAR((ring_block_point(net, r, kBlockA[p], kBlockB[p]) - origin).dot(n), 0.0, 1e-12);
    }
  }
}

TEST(AlmostC1, TemplateCoefficientsMatchLiterals) {
  const double s5 = std::sqrt(5.0);
  const std::vector<Literal> literals = {
      {3, {2.0 / 3, 1.0 / 6, 1.0 / 6}, {0.5, 0.0, 0.5}},
      {5,
       {2.0 / 3, (3 + s5) / 12, (3 - s5) / 12, (3 - s5) / 12, (3 + s5) / 12},
       {0.5, (1 + s5) / 12, (3 - s5) / 6, (1 + s5) / 12, 0.5}},
      {6, {2.0 / 3, 0.5, 1.0 / 6, 0.0, 1.0 / 6, 0.5}, {0.5, 1.0 / 3, 1.0 / 6, 1.0 / 6, 1.0 / 3, 0.5}},
  };
  for (const Literal& lit : literals) {
    const EvTemplate t = regular_template(lit.valence, false);
    const BlockWeights w = ev_spline_coeffs(t.triangle, t.points);
    for (int f = 0; f < lit.valence; ++f) {
      EXPECT_NEAR(w[f][0][0], 1.0 / 3.0, 1e-12);
      EXPECT_NEAR(w[f][3][0], lit.face[f], 1e-12) << lit.valence << " face " << f;
      EXPECT_NEAR(w[f][2][0], lit.spoke[f], 1e-12) << lit.valence << " face " << f;
    }
  }
}

TEST(AlmostC1, ValenceFiveSecondSpline) {
  const double s5 = std::sqrt(5.0);
  const double a = std::sqrt(15 - 6 * s5), b = std::sqrt(30 + 6 * s5), c = std::sqrt(30 - 6 * s5);
  const std::vector<double> face = {1.0 / 6, (9 - s5 + b) / 24, (9 + s5 + c) / 24, (9 + s5 - c) / 24, (9 - s5 - b) / 24};
  const std::vector<double> spoke = {(3 + a) / 12, (11 - s5 + c) / 24, (3 + s5) / 12, (11 - s5 - c) / 24, (3 - a) / 12};
  const EvTemplate t = regular_template(5, false);
  const BlockWeights w = ev_spline_coeffs(t.triangle, t.points);
  for (int f = 0; f < 5; ++f) {
    EXPECT_NEAR(w[f][3][1], face[f], 1e-12);
    EXPECT_NEAR(w[f][2][1], spoke[f], 1e-12);
  }
  EXPECT_NEAR(w[0][2][1], 0.354867, 1e-6);
}

TEST(AlmostC1, StoredTemplatesAgreeWithComputed) {
  for (int mu : {3, 5, 6}) {
    const EvTemplate t = regular_template(mu, false);
    const BlockWeights computed = ev_spline_coeffs(t.triangle, t.points);
    const BlockWeights stored = *stored_template_weights(mu);
    for (int f = 0; f < mu; ++f)
      for (int p = 0; p < 4; ++p)
        for (int nu = 0; nu < 3; ++nu) EXPECT_NEAR(computed[f][p][nu], stored[f][p][nu], 1e-12);
  }
  EXPECT_FALSE(stored_template_weights(7).has_value());
}

TEST(AlmostC1, TemplateModeBuildsWithBoundaryEv) {
  BuildOptions opts;
  opts.mode = SpaceMode::Template;
  const BuildResult b = build_default(mixed_mesh(), opts);
  EXPECT_EQ(b.space.num_dofs(), dimension_formula(mixed_mesh()));
  for (const EvData& ev : b.space.evs) EXPECT_TRUE(ev.from_template);
}

TEST(AlmostC1, AdjacentExtraordinaryVertices) {
  // Two triangles sharing an edge: the shared boundary vertices and both centres are extraordinary.
  const std::vector<Vec3> pts = {{0, 0, 0}, {1, 0, 0}, {0.5, 0.9, 0}, {0.5, -0.9, 0}};
  const QuadMesh m = split_polygons(pts, {{0, 1, 2}, {0, 3, 1}});
  const BuildResult b = build_default(m);
  for (int f = 0; f < m.num_faces(); ++f) {
    Eigen::Matrix4d sum = Eigen::Matrix4d::Zero();
    for (const auto& e : b.space.table.faces[f].entries) sum += e.coeffs;
    const int n = b.space.table.faces[f].degree_index + 1;
    EXPECT_LT((sum.topLeftCorner(n, n).array() - 1.0).abs().maxCoeff(), 1e-13);
  }
}

TEST(AlmostC1, PlanarGeometryUsesOutOfPlaneNormal) {
  const BuildResult b = build_default(disk_mesh(5));
  EXPECT_EQ(b.geometry.dim, 2);
  EXPECT_TRUE(b.geometry.ev_normals.at(0).isApprox(Vec3::UnitZ()));
}

TEST(AlmostC1, GivenNormalIsUsed) {
  auto mesh = ac1::testing::shared(disk_mesh(5));
  Geometry g = default_control_net(*mesh);
  g.ev_normals[0] = Vec3(0.1, 0.0, 1.0).normalized();
  const BuildResult b = build_space(mesh, g);
  EXPECT_TRUE(b.geometry.ev_normals.at(0).isApprox(Vec3(0.1, 0.0, 1.0).normalized()));
}

TEST(AlmostC1, SubdivideTruncateMasksCorner) {
  const Eigen::Matrix3d c = Eigen::Matrix3d::Ones();
  const Eigen::Matrix4d r = subdivide_truncate(c, {true, false, false, false});
  EXPECT_EQ(r.block(0, 0, 2, 2).norm(), 0.0);
  EXPECT_TRUE(r.block(2, 2, 2, 2).isApprox(Eigen::Matrix2d::Ones()));
}
