#include "ac1/bstar.hpp"
#include "ac1/evaluation.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace ac1;
using ac1::testing::cox_de_boor;

namespace {

// Open uniform knots on [0, n]: index of the B-spline whose Greville point is g.
int greville_index(double g, int n) {
  if (g == 0.0) return 0;
  if (g == n) return n + 1;
  return static_cast<int>(std::lround(g + 0.5));
}

std::vector<double> open_knots(int n) {
  std::vector<double> t = {0, 0};
  for (int i = 0; i <= n; ++i) t.push_back(i);
  t.push_back(n);
  t.push_back(n);
  return t;
}

}  // namespace

TEST(Extraction, StructuredGridMatchesTensorBSplines) {
  const int n = 4;
  const QuadMesh mesh = grid_mesh(n, n);
  const ExtractionTable table = assemble_extraction_star(mesh);
  const Geometry g = default_control_net(mesh);
  ASSERT_EQ(table.num_dofs(), (n + 2) * (n + 2));
  const auto knots = open_knots(n);
  for (int f = 0; f < mesh.num_faces(); ++f)
    for (const Vec2& xi : ac1::testing::random_points(6, 100 + f)) {
      const Quad& q = mesh.face(f);
      const auto& p = mesh.positions();
      const Vec3 x = (1 - xi.x()) * (1 - xi.y()) * p[q[0]] + xi.x() * (1 - xi.y()) * p[q[1]] +
                     xi.x() * xi.y() * p[q[2]] + (1 - xi.x()) * xi.y() * p[q[3]];
      const BasisEval b = eval_basis(table, f, xi);
      std::vector<double> val(table.num_dofs(), 0.0);
      for (size_t i = 0; i < b.dofs.size(); ++i) val[b.dofs[i]] = b.value[i];
      for (int d = 0; d < table.num_dofs(); ++d) {
        const int ix = greville_index(g.points[d].x(), n), iy = greville_index(g.points[d].y(), n);
        EXPECT_NEAR(val[d], cox_de_boor(knots, ix, 2, x.x()) * cox_de_boor(knots, iy, 2, x.y()), 1e-13);
      }
    }
}

TEST(Extraction, DofOrdering) {
  const QuadMesh mesh = mixed_mesh();
  const auto dofs = dof_set_star(mesh);
  const auto& cls = mesh.classification();
  ASSERT_EQ(dofs.size(), mesh.num_faces() + cls.boundary_edges().size() + cls.corner_vertices().size());
  for (size_t i = 1; i < dofs.size(); ++i) EXPECT_LT(dofs[i - 1], dofs[i]);
}

TEST(Extraction, PartitionOfUnityAndNonNegative) {
  for (const QuadMesh& mesh : {disk_mesh(5), mixed_mesh(), grid_mesh(3, 2)}) {
    const ExtractionTable t = assemble_extraction_star(mesh);
    for (int f = 0; f < mesh.num_faces(); ++f) {
      Eigen::Matrix4d sum = Eigen::Matrix4d::Zero();
      for (const auto& e : t.faces[f].entries) {
        EXPECT_GE(e.coeffs.minCoeff(), 0.0);
        sum += e.coeffs;
      }
      EXPECT_NEAR((sum.topLeftCorner<3, 3>().array() - 1.0).abs().maxCoeff(), 0.0, 1e-15);
    }
  }
}

TEST(Extraction, RegularNeighbourhoodTemplates) {
  // Interior face of a grid: the face dof has the standard 1/4, 1/2, 1 pattern.
  const QuadMesh mesh = grid_mesh(3, 3);
  const int center = 4;
  const Eigen::Matrix3d c = face_spline_coeffs(mesh, center, center);
  Eigen::Matrix3d expect;
  expect << 0.25, 0.5, 0.25, 0.5, 1.0, 0.5, 0.25, 0.5, 0.25;
  EXPECT_TRUE(c.isApprox(expect, 1e-15));
}

TEST(Extraction, CornerAndEdgeDofsInterpolateBoundary) {
  const QuadMesh mesh = grid_mesh(2, 2);
  const ExtractionTable t = assemble_extraction_star(mesh);
  for (int d = 0; d < t.num_dofs(); ++d) {
    if (t.dofs[d].kind != DofKind::Corner) continue;
    const int v = t.dofs[d].entity;
    const int f = mesh.vertex_faces(v).front();
    std::vector<double> coeffs(t.num_dofs(), 0.0);
    coeffs[d] = 1.0;
    EXPECT_NEAR(eval_bstar(t, coeffs, f, anchored_param(mesh.local_index(f, v), 0, 0)), 1.0, 1e-15);
  }
}
