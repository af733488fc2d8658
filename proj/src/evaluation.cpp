#include "ac1/evaluation.hpp"

#include "ac1/basis.hpp"

#include <cstdio>
#include <ostream>

namespace ac1 {

namespace {

void check_face(const ExtractionTable& table, int face) {
  if (face < 0 || face >= static_cast<int>(table.faces.size()))
    throw Error(ErrorCode::FaceOutOfRange, "face " + std::to_string(face));
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Bezier coefficients of the two polynomial pieces of the C1 spline basis.
Eigen::Matrix<double, 3, 4> piece_matrix(int piece) {
  Eigen::Matrix<double, 3, 4> m = Eigen::Matrix<double, 3, 4>::Zero();
  if (piece == 0) {
    m(0, 0) = 1.0;
    m(1, 1) = 1.0;
    m(2, 1) = m(2, 2) = 0.5;
  } else {
    m(0, 1) = m(0, 2) = 0.5;
    m(1, 2) = 1.0;
    m(2, 3) = 1.0;
  }
  return m;
}

}  // namespace

BasisEval eval_basis(const ExtractionTable& table, int face, const Vec2& xi) {
  check_face(table, face);
  const FaceRecord& rec = table.faces[face];
  const TensorBasis tb = tensor_basis(rec.degree_index, xi);
  BasisEval out;
  const size_t n = rec.entries.size();
  out.dofs.reserve(n);
  out.value.reserve(n);
  out.grad.reserve(n);
  out.hess.reserve(n);
  for (const auto& e : rec.entries) {
    out.dofs.push_back(e.dof);
    out.value.push_back(e.coeffs.cwiseProduct(tb.value).sum());
    out.grad.emplace_back(e.coeffs.cwiseProduct(tb.du).sum(), e.coeffs.cwiseProduct(tb.dv).sum());
    Eigen::Matrix2d h;
    h(0, 0) = e.coeffs.cwiseProduct(tb.duu).sum();
    h(0, 1) = h(1, 0) = e.coeffs.cwiseProduct(tb.duv).sum();
    h(1, 1) = e.coeffs.cwiseProduct(tb.dvv).sum();
    out.hess.push_back(h);
  }
  return out;
}

PhysicalFrame eval_geometry(const ExtractionTable& table, const std::vector<Vec3>& points, int face, const Vec2& xi) {
  const BasisEval b = eval_basis(table, face, xi);
  PhysicalFrame fr;
  for (size_t i = 0; i < b.dofs.size(); ++i) {
    const Vec3& p = points[b.dofs[i]];
    fr.x += b.value[i] * p;
    fr.jac.col(0) += b.grad[i].x() * p;
    fr.jac.col(1) += b.grad[i].y() * p;
    fr.xuu += b.hess[i](0, 0) * p;
    fr.xuv += b.hess[i](0, 1) * p;
    fr.xvv += b.hess[i](1, 1) * p;
  }
  fr.det = fr.jac(0, 0) * fr.jac(1, 1) - fr.jac(0, 1) * fr.jac(1, 0);
  return fr;
}

ScalarEval eval_function(const ExtractionTable& table, const std::vector<double>& coeffs, int face, const Vec2& xi) {
  const BasisEval b = eval_basis(table, face, xi);
  ScalarEval s;
  for (size_t i = 0; i < b.dofs.size(); ++i) {
    const double c = coeffs[b.dofs[i]];
    s.value += c * b.value[i];
    s.grad += c * b.grad[i];
    s.hess += c * b.hess[i];
  }
  return s;
}

PhysicalDerivs physical_derivatives(const PhysicalFrame& frame, const Vec2& grad_xi, const Eigen::Matrix2d& hess_xi) {
  const double a = frame.jac(0, 0), b = frame.jac(1, 0);  // x_u, y_u
  const double c = frame.jac(0, 1), e = frame.jac(1, 1);  // x_v, y_v
  const double scale = a * a + b * b + c * c + e * e;
  if (std::abs(frame.det) < 1e-14 * std::max(scale, 1e-300))
    throw Error(ErrorCode::SingularJacobian, "Jacobian determinant vanishes");
  Eigen::Matrix2d jt;  // J^T with J = [[x_u, x_v], [y_u, y_v]]
  jt << a, b, c, e;
  PhysicalDerivs d;
  d.grad = jt.partialPivLu().solve(grad_xi);
  // Subtract the curvature term, then solve for (f_xx, f_xy, f_yy).
  const double fuu = hess_xi(0, 0) - d.grad.dot(frame.xuu.head<2>());
  const double fuv = hess_xi(0, 1) - d.grad.dot(frame.xuv.head<2>());
  const double fvv = hess_xi(1, 1) - d.grad.dot(frame.xvv.head<2>());
  Eigen::Matrix3d m;
  m << a * a, 2.0 * a * b, b * b,
       a * c, a * e + b * c, b * e,
       c * c, 2.0 * c * e, e * e;
  const Eigen::Vector3d h = m.partialPivLu().solve(Eigen::Vector3d(fuu, fuv, fvv));
  d.hess << h[0], h[1], h[1], h[2];
  return d;
}

PhysicalBasis physical_basis(const PhysicalFrame& frame, const BasisEval& basis) {
  const double a = frame.jac(0, 0), b = frame.jac(1, 0);
  const double c = frame.jac(0, 1), e = frame.jac(1, 1);
  const double scale = a * a + b * b + c * c + e * e;
  if (std::abs(frame.det) < 1e-14 * std::max(scale, 1e-300))
    throw Error(ErrorCode::SingularJacobian, "Jacobian determinant vanishes");
  Eigen::Matrix2d jt;
  jt << a, b, c, e;
  const Eigen::Matrix2d jt_inv = jt.inverse();
  Eigen::Matrix3d m;
  m << a * a, 2.0 * a * b, b * b,
       a * c, a * e + b * c, b * e,
       c * c, 2.0 * c * e, e * e;
  const Eigen::Matrix3d m_inv = m.inverse();
  PhysicalBasis out;
  out.grad.resize(basis.dofs.size());
  out.hess.resize(basis.dofs.size());
  for (size_t i = 0; i < basis.dofs.size(); ++i) {
    const Vec2 g = jt_inv * basis.grad[i];
    const Eigen::Vector3d rhs(basis.hess[i](0, 0) - g.dot(frame.xuu.head<2>()),
                              basis.hess[i](0, 1) - g.dot(frame.xuv.head<2>()),
                              basis.hess[i](1, 1) - g.dot(frame.xvv.head<2>()));
    const Eigen::Vector3d h = m_inv * rhs;
    out.grad[i] = g;
    out.hess[i] << h[0], h[1], h[1], h[2];
  }
  return out;
}

double shared_edge_gap(const ExtractionTable& table, const std::vector<Vec3>& points, const QuadMesh& mesh,
                       int samples) {
  const int m = std::max(samples, 2);
  double gap = 0.0;
  for (const auto& e : mesh.edges()) {
    if (e.num_faces != 2) continue;
    for (int i = 0; i < m; ++i) {
      const double t = static_cast<double>(i) / (m - 1);
      // Both faces are counter-clockwise, so they run along the edge in opposite directions.
      const Vec3 a = eval_geometry(table, points, e.faces[0], edge_param(e.local[0], t)).x;
      const Vec3 b = eval_geometry(table, points, e.faces[1], edge_param(e.local[1], 1.0 - t)).x;
      gap = std::max(gap, (a - b).norm());
    }
  }
  return gap;
}

void write_vtk(std::ostream& out, const ExtractionTable& table, const std::vector<Vec3>& points, int samples,
               const std::vector<double>* field, const std::string& field_name) {
  const int m = std::max(samples, 2);
  const int nf = static_cast<int>(table.faces.size());
  std::vector<Vec3> xs;
  std::vector<double> fs;
  xs.reserve(static_cast<size_t>(nf) * m * m);
  for (int f = 0; f < nf; ++f)
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < m; ++i) {
        const Vec2 xi(static_cast<double>(i) / (m - 1), static_cast<double>(j) / (m - 1));
        xs.push_back(eval_geometry(table, points, f, xi).x);
        if (field) fs.push_back(eval_function(table, *field, f, xi).value);
      }
  out << "# vtk DataFile Version 3.0\nalmost-C1 spline samples\nASCII\nDATASET POLYDATA\n";
  out << "POINTS " << xs.size() << " double\n";
  for (const auto& p : xs) out << fmt(p.x()) << ' ' << fmt(p.y()) << ' ' << fmt(p.z()) << '\n';
  const long ncell = static_cast<long>(nf) * (m - 1) * (m - 1);
  out << "POLYGONS " << ncell << ' ' << 5 * ncell << '\n';
  for (int f = 0; f < nf; ++f)
    for (int j = 0; j + 1 < m; ++j)
      for (int i = 0; i + 1 < m; ++i) {
        const long base = static_cast<long>(f) * m * m;
        const long p0 = base + j * m + i;
        out << "4 " << p0 << ' ' << p0 + 1 << ' ' << p0 + m + 1 << ' ' << p0 + m << '\n';
      }
  if (field) {
    out << "POINT_DATA " << xs.size() << "\nSCALARS " << field_name << " double 1\nLOOKUP_TABLE default\n";
    for (double v : fs) out << fmt(v) << '\n';
  }
}

std::vector<BezierNet> bezier_pieces(const ExtractionTable& table, const std::vector<Vec3>& points, int face) {
  check_face(table, face);
  const VectorNet net = vector_net(table, points, face);
  std::vector<BezierNet> out;
  if (!table.faces[face].extraordinary) {
    BezierNet b;
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) b[j][k] = net_point(net, j, k);
    out.push_back(b);
    return out;
  }
  for (int pu = 0; pu < 2; ++pu)
    for (int pv = 0; pv < 2; ++pv) {
      const auto mu = piece_matrix(pu), mv = piece_matrix(pv);
      BezierNet b;
      for (int d = 0; d < 3; ++d) {
        const Eigen::Matrix3d c = mu * net[d] * mv.transpose();
        for (int j = 0; j < 3; ++j)
          for (int k = 0; k < 3; ++k) b[j][k][d] = c(j, k);
      }
      out.push_back(b);
    }
  return out;
}

void write_bezier_obj(std::ostream& out, const ExtractionTable& table, const std::vector<Vec3>& points) {
  out << "# Bezier control nets, one 3x3 net per polynomial piece\n";
  long base = 1;
  std::vector<std::array<long, 4>> quads;
  for (int f = 0; f < static_cast<int>(table.faces.size()); ++f)
    for (const auto& b : bezier_pieces(table, points, f)) {
      for (int k = 0; k < 3; ++k)
        for (int j = 0; j < 3; ++j)
          out << "v " << fmt(b[j][k].x()) << ' ' << fmt(b[j][k].y()) << ' ' << fmt(b[j][k].z()) << '\n';
      for (int k = 0; k < 2; ++k)
        for (int j = 0; j < 2; ++j) {
          const long p = base + 3 * k + j;
          quads.push_back({p, p + 1, p + 4, p + 3});
        }
      base += 9;
    }
  for (const auto& q : quads) out << "f " << q[0] << ' ' << q[1] << ' ' << q[2] << ' ' << q[3] << '\n';
}

}  // namespace ac1
