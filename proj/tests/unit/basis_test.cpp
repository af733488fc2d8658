#include "ac1/basis.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

using namespace ac1;

TEST(Basis, BernsteinMatchesClosedForm) {
  for (double t : {0.0, 0.2, 0.5, 0.9, 1.0}) {
    double v[3], d1[3], d2[3];
    bernstein2(t, v, d1, d2);
    EXPECT_NEAR(v[0], (1 - t) * (1 - t), 1e-15);
    EXPECT_NEAR(v[1], 2 * t * (1 - t), 1e-15);
    EXPECT_NEAR(v[2], t * t, 1e-15);
    EXPECT_NEAR(d1[1], 2 - 4 * t, 1e-15);
    EXPECT_NEAR(d2[0], 2.0, 1e-15);
  }
}

TEST(Basis, C1SplinesMatchCoxDeBoor) {
  const std::vector<double> knots = {0, 0, 0, 0.5, 1, 1, 1};
  for (int i = 0; i <= 40; ++i) {
    const double t = i / 40.0;
    double v[4], d1[4], d2[4];
    c1_quadratic(t, v, d1, d2);
    for (int j = 0; j < 4; ++j) EXPECT_NEAR(v[j], ac1::testing::cox_de_boor(knots, j, 2, t), 1e-14) << t;
  }
}

TEST(Basis, DerivativesMatchFiniteDifferences) {
  const double h = 1e-6;
  for (double t : {0.1, 0.3, 0.7, 0.95}) {
    double v[4], d1[4], d2[4], vp[4], vm[4], dp[4], dm[4], tmp[4];
    c1_quadratic(t, v, d1, d2);
    c1_quadratic(t + h, vp, dp, tmp);
    c1_quadratic(t - h, vm, dm, tmp);
    for (int j = 0; j < 4; ++j) {
      EXPECT_NEAR(d1[j], (vp[j] - vm[j]) / (2 * h), 1e-8);
      EXPECT_NEAR(d2[j], (dp[j] - dm[j]) / (2 * h), 1e-6);
    }
  }
}

TEST(Basis, TensorPartitionOfUnity) {
  for (int n : {2, 3})
    for (const Vec2& xi : ac1::testing::random_points(30, 3)) {
      const TensorBasis tb = tensor_basis(n, xi);
      EXPECT_NEAR(tb.value.sum(), 1.0, 1e-14);
      EXPECT_NEAR(tb.du.sum(), 0.0, 1e-13);
      EXPECT_NEAR(tb.dvv.sum(), 0.0, 1e-12);
    }
}

TEST(Basis, KnotInsertionReproducesFunctions) {
  // K maps Bernstein coefficients to C1 spline coefficients of the same polynomial.
  const Eigen::Matrix<double, 4, 3> k = knot_insertion_matrix();
  EXPECT_TRUE(k.row(0).isApprox(Eigen::RowVector3d(1, 0, 0)));
  EXPECT_TRUE(k.row(1).isApprox(Eigen::RowVector3d(0.5, 0.5, 0)));
  EXPECT_TRUE(k.row(2).isApprox(Eigen::RowVector3d(0, 0.5, 0.5)));
  EXPECT_TRUE(k.row(3).isApprox(Eigen::RowVector3d(0, 0, 1)));
  Eigen::Matrix4d c = Eigen::Matrix4d::Zero();
  c.topLeftCorner<3, 3>() << 1, -2, 0.5, 3, 0, 1, -1, 2, 4;
  const Eigen::Matrix4d c4 = insert_knots(c);
  for (const Vec2& xi : ac1::testing::random_points(20, 5)) {
    const double a = c.cwiseProduct(tensor_basis(2, xi).value).sum();
    const double b = c4.cwiseProduct(tensor_basis(3, xi).value).sum();
    EXPECT_NEAR(a, b, 1e-13);
  }
}
