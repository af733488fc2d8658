#pragma once

#include "ac1/mesh.hpp"

#include <string>
#include <unordered_map>
#include <vector>

namespace ac1 {

enum class DofKind { Face = 0, BoundaryEdge = 1, Corner = 2, EV = 3 };

struct DofId {
  DofKind kind = DofKind::Face;
  int entity = -1;  // face, edge or vertex id
  int nu = 0;       // 1..3 for EV dofs, 0 otherwise

  friend bool operator==(const DofId&, const DofId&) = default;
  friend auto operator<=>(const DofId&, const DofId&) = default;
  std::string str() const;
};

struct DofIdHash {
  size_t operator()(const DofId& d) const {
    return (static_cast<size_t>(d.entity) * 8u + static_cast<size_t>(d.kind)) * 4u + static_cast<size_t>(d.nu);
  }
};

// Coefficient matrix of one dof on one face. Entry (j, k) has j along u and k
// along v. Regular faces use the leading 3x3 block (Bernstein coefficients),
// extraordinary faces the full 4x4 (C1 spline coefficients on knots 0,0,0,1/2,1,1,1).
struct FaceEntry {
  int dof = -1;  // index into ExtractionTable::dofs
  Eigen::Matrix4d coeffs = Eigen::Matrix4d::Zero();
};

struct FaceRecord {
  bool extraordinary = false;
  int degree_index = 2;  // n: coefficient grid is (n+1)x(n+1); 2 regular, 3 extraordinary
  std::vector<FaceEntry> entries;  // sorted by dof index
};

struct ExtractionTable {
  std::vector<DofId> dofs;
  std::vector<FaceRecord> faces;

  int num_dofs() const { return static_cast<int>(dofs.size()); }
  int index_of(const DofId& id) const;  // -1 when absent
  void rebuild_index();

 private:
  std::unordered_map<DofId, int, DofIdHash> index_;
};

// Boundary and corner flags: chi_boundary is 1 for interior vertices and edges;
// chi_corner is 0 exactly at corner vertices.
struct FlagSet {
  std::vector<int> vertex_boundary;
  std::vector<int> edge_boundary;
  std::vector<int> vertex_corner;
};

FlagSet make_flags(const QuadMesh& mesh);

// Faces, then boundary edges, then corner vertices, each by id.
std::vector<DofId> dof_set_star(const QuadMesh& mesh);

// 3x3 coefficient matrices of the three kinds of dofs on a target face.
// Entries outside the support are zero.
Eigen::Matrix3d face_spline_coeffs(const QuadMesh& mesh, int face_dof, int target);
Eigen::Matrix3d boundary_edge_spline_coeffs(const QuadMesh& mesh, int edge_dof, int target);
Eigen::Matrix3d corner_vertex_spline_coeffs(const QuadMesh& mesh, int vertex_dof, int target);
Eigen::Matrix3d spline_coeffs(const QuadMesh& mesh, const DofId& dof, int target);

ExtractionTable assemble_extraction_star(const QuadMesh& mesh);

// Coefficient net of a spline function with the given dof coefficients on one face.
// Returns a 4x4 matrix whose leading (n+1)x(n+1) block is meaningful.
Eigen::Matrix4d face_net(const ExtractionTable& table, const std::vector<double>& coeffs, int face);

// Value of a function of the table's space at xi on face.
double eval_bstar(const ExtractionTable& table, const std::vector<double>& coeffs, int face, const Vec2& xi);

}  // namespace ac1
