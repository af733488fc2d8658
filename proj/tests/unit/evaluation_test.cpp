#include "ac1/basis.hpp"
#include "ac1/evaluation.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace ac1;
using ac1::testing::build_default;

namespace {

// Mixed mesh with the interior control points pushed around, so the map is not affine.
BuildResult curved_mixed() {
  BuildResult b = build_default(mixed_mesh());
  for (size_t i = 0; i < b.geometry.points.size(); ++i)
    if (b.space.table.dofs[i].kind == DofKind::Face) b.geometry.points[i] += Vec3(0.03 * std::sin(3.0 * i), 0.02 * std::cos(5.0 * i), 0);
  return b;
}

std::vector<double> coordinate(const Geometry& g, int axis) {
  std::vector<double> c;
  for (const auto& p : g.points) c.push_back(p[axis]);
  return c;
}

}  // namespace

TEST(Evaluation, GeometryDerivativesMatchFiniteDifferences) {
  const BuildResult b = curved_mixed();
  const double h = 1e-6;
  for (int f = 0; f < b.space.topo().num_faces(); ++f)
    for (const Vec2& xi : {Vec2(0.3, 0.2), Vec2(0.7, 0.8)}) {
      const PhysicalFrame fr = eval_geometry(b.space.table, b.geometry.points, f, xi);
      const Vec3 du = (eval_geometry(b.space.table, b.geometry.points, f, xi + Vec2(h, 0)).x -
                       eval_geometry(b.space.table, b.geometry.points, f, xi - Vec2(h, 0)).x) / (2 * h);
      const Vec3 dv_u = (eval_geometry(b.space.table, b.geometry.points, f, xi + Vec2(0, h)).jac.col(0) -
                         eval_geometry(b.space.table, b.geometry.points, f, xi - Vec2(0, h)).jac.col(0)) / (2 * h);
      EXPECT_LT((fr.jac.col(0) - du).norm(), 1e-8);
      EXPECT_LT((fr.xuv - dv_u).norm(), 1e-7);
    }
}

TEST(Evaluation, CoordinateFunctionsHaveUnitGradients) {
  const BuildResult b = curved_mixed();
  const auto cx = coordinate(b.geometry, 0), cy = coordinate(b.geometry, 1);
  for (int f = 0; f < b.space.topo().num_faces(); ++f)
    for (const Vec2& xi : ac1::testing::random_points(5, 40 + f)) {
      const PhysicalFrame fr = eval_geometry(b.space.table, b.geometry.points, f, xi);
      const ScalarEval sx = eval_function(b.space.table, cx, f, xi);
      const ScalarEval sy = eval_function(b.space.table, cy, f, xi);
      const PhysicalDerivs dx = physical_derivatives(fr, sx.grad, sx.hess);
      const PhysicalDerivs dy = physical_derivatives(fr, sy.grad, sy.hess);
      EXPECT_LT((dx.grad - Vec2(1, 0)).norm(), 1e-12);
      EXPECT_LT((dy.grad - Vec2(0, 1)).norm(), 1e-12);
      EXPECT_LT(dx.hess.norm(), 1e-10);
      EXPECT_LT(dy.hess.norm(), 1e-10);
    }
}

TEST(Evaluation, ChainRuleRoundTrip) {
  // Push physical derivatives forward with the map and compare with the inputs.
  const BuildResult b = curved_mixed();
  const PhysicalFrame fr = eval_geometry(b.space.table, b.geometry.points, 2, Vec2(0.4, 0.6));
  const Vec2 g(0.3, -1.1);
  Eigen::Matrix2d h;
  h << 0.5, 0.2, 0.2, -0.7;
  const PhysicalDerivs d = physical_derivatives(fr, g, h);
  const Eigen::Matrix2d j = fr.jac.topRows<2>();
  EXPECT_LT((j.transpose() * d.grad - g).norm(), 1e-12);
  Eigen::Matrix2d back = j.transpose() * d.hess * j;
  back(0, 0) += d.grad.dot(fr.xuu.head<2>());
  back(0, 1) += d.grad.dot(fr.xuv.head<2>());
  back(1, 0) += d.grad.dot(fr.xuv.head<2>());
  back(1, 1) += d.grad.dot(fr.xvv.head<2>());
  EXPECT_LT((back - h).norm(), 1e-12);
}

TEST(Evaluation, BatchedBasisMatchesSingle) {
  const BuildResult b = curved_mixed();
  const Vec2 xi(0.25, 0.65);
  const BasisEval be = eval_basis(b.space.table, 0, xi);
  const PhysicalFrame fr = eval_geometry(b.space.table, b.geometry.points, 0, xi);
  const PhysicalBasis pb = physical_basis(fr, be);
  for (size_t i = 0; i < be.dofs.size(); ++i) {
    const PhysicalDerivs d = physical_derivatives(fr, be.grad[i], be.hess[i]);
    EXPECT_LT((d.grad - pb.grad[i]).norm(), 1e-12);
    EXPECT_LT((d.hess - pb.hess[i]).norm(), 1e-10);
  }
}

TEST(Evaluation, SingularJacobianDetected) {
  PhysicalFrame fr;
  fr.jac << 1, 2, 2, 4, 0, 0;
  EXPECT_THROW(physical_derivatives(fr, Vec2(1, 0), Eigen::Matrix2d::Zero()), Error);
}

TEST(Evaluation, FaceOutOfRange) {
  const BuildResult b = build_default(disk_mesh(3));
  EXPECT_THROW(eval_basis(b.space.table, 3, Vec2(0.5, 0.5)), Error);
}

TEST(Evaluation, BezierPiecesReproduceSurface) {
  const BuildResult b = curved_mixed();
  for (int f = 0; f < b.space.topo().num_faces(); ++f) {
    const auto pieces = bezier_pieces(b.space.table, b.geometry.points, f);
    const bool ev = b.space.table.faces[f].extraordinary;
    ASSERT_EQ(pieces.size(), ev ? 4u : 1u);
    for (const Vec2& xi : ac1::testing::random_points(6, 7 + f)) {
      int pu = 0, pv = 0;
      Vec2 local = xi;
      if (ev) {
        pu = xi.x() >= 0.5;
        pv = xi.y() >= 0.5;
        local = Vec2(2 * xi.x() - pu, 2 * xi.y() - pv);
      }
      const TensorBasis tb = tensor_basis(2, local);
      Vec3 x = Vec3::Zero();
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) x += tb.value(j, k) * pieces[2 * pu + pv][j][k];
      EXPECT_LT((x - eval_geometry(b.space.table, b.geometry.points, f, xi).x).norm(), 1e-13);
    }
  }
}

TEST(Evaluation, SurfaceIsWatertight) {
  const BuildResult b = curved_mixed();
  EXPECT_LT(shared_edge_gap(b.space.table, b.geometry.points, b.space.topo()), 1e-12);
}

TEST(Evaluation, VtkLayout) {
  const BuildResult b = build_default(disk_mesh(3));
  std::ostringstream out;
  const std::vector<double> field(b.space.num_dofs(), 2.0);
  write_vtk(out, b.space.table, b.geometry.points, 4, &field, "u");
  const std::string s = out.str();
  EXPECT_NE(s.find("POINTS 48 double"), std::string::npos);
  EXPECT_NE(s.find("POLYGONS 27 135"), std::string::npos);
  EXPECT_NE(s.find("SCALARS u double 1"), std::string::npos);
}

TEST(Evaluation, BezierObjCounts) {
  const BuildResult b = build_default(mixed_mesh());
  std::ostringstream out;
  write_bezier_obj(out, b.space.table, b.geometry.points);
  const auto& cls = b.space.topo().classification();
  const int pieces = 4 * static_cast<int>(cls.extraordinary_faces().size()) +
                     (b.space.topo().num_faces() - static_cast<int>(cls.extraordinary_faces().size()));
  std::istringstream in(out.str());
  std::string line;
  int v = 0, f = 0;
  while (std::getline(in, line)) {
    v += line.rfind("v ", 0) == 0;
    f += line.rfind("f ", 0) == 0;
  }
  EXPECT_EQ(v, 9 * pieces);
  EXPECT_EQ(f, 4 * pieces);
}
