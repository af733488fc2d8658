#pragma once

#include "ac1/almost_c1.hpp"

#include <iosfwd>

namespace ac1 {

// Values and parametric derivatives of the active dofs of one face.
struct BasisEval {
  std::vector<int> dofs;
  std::vector<double> value;
  std::vector<Vec2> grad;               // (d/du, d/dv)
  std::vector<Eigen::Matrix2d> hess;    // parametric Hessian
};

// Dispatches on the face kind: Bernstein on regular faces, C1 splines on
// extraordinary ones. On the knot line 1/2 the right piece is used.
BasisEval eval_basis(const ExtractionTable& table, int face, const Vec2& xi);

struct PhysicalFrame {
  Vec3 x = Vec3::Zero();
  Eigen::Matrix<double, 3, 2> jac = Eigen::Matrix<double, 3, 2>::Zero();
  Vec3 xuu = Vec3::Zero(), xuv = Vec3::Zero(), xvv = Vec3::Zero();
  double det = 0.0;  // planar Jacobian determinant (x_u * y_v - x_v * y_u)
};

PhysicalFrame eval_geometry(const ExtractionTable& table, const std::vector<Vec3>& points, int face, const Vec2& xi);

// Function value with parametric derivatives.
struct ScalarEval {
  double value = 0.0;
  Vec2 grad = Vec2::Zero();
  Eigen::Matrix2d hess = Eigen::Matrix2d::Zero();
};

ScalarEval eval_function(const ExtractionTable& table, const std::vector<double>& coeffs, int face, const Vec2& xi);

struct PhysicalDerivs {
  Vec2 grad = Vec2::Zero();
  Eigen::Matrix2d hess = Eigen::Matrix2d::Zero();
};

// Chain rule for planar geometries, including the curvature term of the map.
// Throws SingularJacobian when |det J| is tiny relative to |J|^2.
PhysicalDerivs physical_derivatives(const PhysicalFrame& frame, const Vec2& grad_xi, const Eigen::Matrix2d& hess_xi);

// Physical gradients and Hessians of all basis functions at one point.
struct PhysicalBasis {
  std::vector<Vec2> grad;
  std::vector<Eigen::Matrix2d> hess;
};
PhysicalBasis physical_basis(const PhysicalFrame& frame, const BasisEval& basis);

// Largest distance between the two sides of any interior edge, sampled at
// `samples` equispaced points per edge (endpoints included).
double shared_edge_gap(const ExtractionTable& table, const std::vector<Vec3>& points, const QuadMesh& mesh,
                       int samples = 11);

// Legacy VTK polydata: every face sampled on an m x m grid, written as quads.
// `field` (optional) holds one coefficient per dof and is sampled as point data.
void write_vtk(std::ostream& out, const ExtractionTable& table, const std::vector<Vec3>& points, int samples,
               const std::vector<double>* field = nullptr, const std::string& field_name = "f");

// Bezier pieces of a face: 1 on regular faces, 4 on extraordinary ones. Each
// piece is a 3x3 net of geometric control points indexed [j][k].
using BezierNet = std::array<std::array<Vec3, 3>, 3>;
std::vector<BezierNet> bezier_pieces(const ExtractionTable& table, const std::vector<Vec3>& points, int face);

// OBJ with the control nets of all Bezier pieces (2x2 quads per piece).
void write_bezier_obj(std::ostream& out, const ExtractionTable& table, const std::vector<Vec3>& points);

}  // namespace ac1
