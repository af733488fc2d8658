#pragma once

#include "ac1/common.hpp"

#include <array>

namespace ac1 {

// Univariate quadratic Bernstein polynomials and their first two derivatives.
void bernstein2(double t, double* value, double* d1, double* d2);

// Univariate C1 quadratic B-splines on the knot vector (0,0,0,1/2,1,1,1).
// At t = 1/2 the right piece is used.
void c1_quadratic(double t, double* value, double* d1, double* d2);

// Tensor-product local basis on the unit square. Entry (j, k) of each matrix is
// N_j(u) N_k(v). For n = 2 the Bernstein basis occupies the leading 3x3 block,
// for n = 3 the C1 basis fills the 4x4 matrix.
struct TensorBasis {
  Eigen::Matrix4d value = Eigen::Matrix4d::Zero();
  Eigen::Matrix4d du = Eigen::Matrix4d::Zero();
  Eigen::Matrix4d dv = Eigen::Matrix4d::Zero();
  Eigen::Matrix4d duu = Eigen::Matrix4d::Zero();
  Eigen::Matrix4d duv = Eigen::Matrix4d::Zero();
  Eigen::Matrix4d dvv = Eigen::Matrix4d::Zero();
};

TensorBasis tensor_basis(int n, const Vec2& xi);

// The 16 C1 tensor basis functions (same layout as tensor_basis(3, xi)).
inline TensorBasis eval_b1_basis(const Vec2& xi) { return tensor_basis(3, xi); }

// Maps quadratic Bezier coefficients on [0,1] to the C1 spline coefficients
// after inserting the knot 1/2.
Eigen::Matrix<double, 4, 3> knot_insertion_matrix();

// Knot insertion applied in both directions: K c K^T (3x3 block in, 4x4 out).
Eigen::Matrix4d insert_knots(const Eigen::Matrix4d& c3);

}  // namespace ac1
