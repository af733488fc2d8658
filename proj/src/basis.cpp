#include "ac1/basis.hpp"

namespace ac1 {

void bernstein2(double t, double* value, double* d1, double* d2) {
  const double s = 1.0 - t;
  value[0] = s * s;
  value[1] = 2.0 * s * t;
  value[2] = t * t;
  d1[0] = -2.0 * s;
  d1[1] = 2.0 - 4.0 * t;
  d1[2] = 2.0 * t;
  d2[0] = 2.0;
  d2[1] = -4.0;
  d2[2] = 2.0;
}

void c1_quadratic(double t, double* value, double* d1, double* d2) {
  double b[3], db[3], ddb[3];
  for (int i = 0; i < 4; ++i) value[i] = d1[i] = d2[i] = 0.0;
  if (t < 0.5) {
    bernstein2(2.0 * t, b, db, ddb);
    // Bezier coefficients of the left piece: d0, d1, (d1 + d2)/2.
    value[0] = b[0];
    value[1] = b[1] + 0.5 * b[2];
    value[2] = 0.5 * b[2];
    d1[0] = 2.0 * db[0];
    d1[1] = 2.0 * (db[1] + 0.5 * db[2]);
    d1[2] = 2.0 * 0.5 * db[2];
    d2[0] = 4.0 * ddb[0];
    d2[1] = 4.0 * (ddb[1] + 0.5 * ddb[2]);
    d2[2] = 4.0 * 0.5 * ddb[2];
  } else {
    bernstein2(2.0 * t - 1.0, b, db, ddb);
    // Right piece: (d1 + d2)/2, d2, d3.
    value[1] = 0.5 * b[0];
    value[2] = 0.5 * b[0] + b[1];
    value[3] = b[2];
    d1[1] = 2.0 * 0.5 * db[0];
    d1[2] = 2.0 * (0.5 * db[0] + db[1]);
    d1[3] = 2.0 * db[2];
    d2[1] = 4.0 * 0.5 * ddb[0];
    d2[2] = 4.0 * (0.5 * ddb[0] + ddb[1]);
    d2[3] = 4.0 * ddb[2];
  }
}

TensorBasis tensor_basis(int n, const Vec2& xi) {
  double u[4] = {0, 0, 0, 0}, du[4] = {0, 0, 0, 0}, duu[4] = {0, 0, 0, 0};
  double v[4] = {0, 0, 0, 0}, dv[4] = {0, 0, 0, 0}, dvv[4] = {0, 0, 0, 0};
  if (n == 2) {
    bernstein2(xi.x(), u, du, duu);
    bernstein2(xi.y(), v, dv, dvv);
  } else {
    c1_quadratic(xi.x(), u, du, duu);
    c1_quadratic(xi.y(), v, dv, dvv);
  }
  TensorBasis tb;
  for (int j = 0; j <= n; ++j)
    for (int k = 0; k <= n; ++k) {
      tb.value(j, k) = u[j] * v[k];
      tb.du(j, k) = du[j] * v[k];
      tb.dv(j, k) = u[j] * dv[k];
      tb.duu(j, k) = duu[j] * v[k];
      tb.duv(j, k) = du[j] * dv[k];
      tb.dvv(j, k) = u[j] * dvv[k];
    }
  return tb;
}

Eigen::Matrix<double, 4, 3> knot_insertion_matrix() {
  Eigen::Matrix<double, 4, 3> k;
  k << 1.0, 0.0, 0.0,
       0.5, 0.5, 0.0,
       0.0, 0.5, 0.5,
       0.0, 0.0, 1.0;
  return k;
}

Eigen::Matrix4d insert_knots(const Eigen::Matrix4d& c3) {
  const Eigen::Matrix<double, 4, 3> k = knot_insertion_matrix();
  return k * c3.topLeftCorner<3, 3>() * k.transpose();
}

}  // namespace ac1
