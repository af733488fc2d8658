#include "ac1/bstar.hpp"

#include "ac1/basis.hpp"

#include <algorithm>
#include <set>

namespace ac1 {

std::string DofId::str() const {
  switch (kind) {
    case DofKind::Face: return "face:" + std::to_string(entity);
    case DofKind::BoundaryEdge: return "edge:" + std::to_string(entity);
    case DofKind::Corner: return "corner:" + std::to_string(entity);
    case DofKind::EV: return "ev:" + std::to_string(entity) + ":" + std::to_string(nu);
  }
  return "?";
}

int ExtractionTable::index_of(const DofId& id) const {
  auto it = index_.find(id);
  return it == index_.end() ? -1 : it->second;
}

void ExtractionTable::rebuild_index() {
  index_.clear();
  for (int i = 0; i < num_dofs(); ++i) index_.emplace(dofs[i], i);
}

FlagSet make_flags(const QuadMesh& mesh) {
  const auto& cls = mesh.classification();
  FlagSet flags;
  flags.vertex_boundary.resize(mesh.num_vertices());
  flags.vertex_corner.resize(mesh.num_vertices());
  flags.edge_boundary.resize(mesh.num_edges());
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    flags.vertex_boundary[v] = cls.boundary_vertex[v] ? 0 : 1;
    flags.vertex_corner[v] = cls.corner_vertex[v] ? 0 : 1;
  }
  for (int e = 0; e < mesh.num_edges(); ++e) flags.edge_boundary[e] = cls.boundary_edge[e] ? 0 : 1;
  return flags;
}

std::vector<DofId> dof_set_star(const QuadMesh& mesh) {
  const auto& cls = mesh.classification();
  std::vector<DofId> dofs;
  for (int f = 0; f < mesh.num_faces(); ++f) dofs.push_back({DofKind::Face, f, 0});
  for (int e : cls.boundary_edges()) dofs.push_back({DofKind::BoundaryEdge, e, 0});
  for (int v : cls.corner_vertices()) dofs.push_back({DofKind::Corner, v, 0});
  return dofs;
}

namespace {

// Every coefficient of a face sits at a vertex, an edge midpoint or the face
// center. A dof's coefficient there depends only on that mesh entity, which
// makes the functions continuous across faces by construction.
double value_at_vertex(const QuadMesh& mesh, const DofId& dof, int vertex) {
  const auto& cls = mesh.classification();
  switch (dof.kind) {
    case DofKind::Face: {
      if (cls.boundary_vertex[vertex]) return 0.0;
      if (mesh.local_index(dof.entity, vertex) < 0) return 0.0;
      return 1.0 / cls.valence[vertex];
    }
    case DofKind::BoundaryEdge: {
      const auto& e = mesh.edge(dof.entity);
      if (e.v0 != vertex && e.v1 != vertex) return 0.0;
      return cls.corner_vertex[vertex] ? 0.0 : 0.5;
    }
    case DofKind::Corner: return dof.entity == vertex ? 1.0 : 0.0;
    case DofKind::EV: break;
  }
  return 0.0;
}

double value_at_edge(const QuadMesh& mesh, const DofId& dof, int edge) {
  const auto& e = mesh.edge(edge);
  switch (dof.kind) {
    case DofKind::Face: {
      if (e.num_faces < 2) return 0.0;
      return (e.faces[0] == dof.entity || e.faces[1] == dof.entity) ? 0.5 : 0.0;
    }
    case DofKind::BoundaryEdge: return dof.entity == edge ? 1.0 : 0.0;
    default: return 0.0;
  }
}

}  // namespace

Eigen::Matrix3d spline_coeffs(const QuadMesh& mesh, const DofId& dof, int target) {
  if (target < 0 || target >= mesh.num_faces()) throw Error(ErrorCode::FaceOutOfRange, "target face");
  Eigen::Matrix3d c = Eigen::Matrix3d::Zero();
  const auto& q = mesh.face(target);
  for (int m = 0; m < 4; ++m) {
    auto [jv, kv] = anchored_index(m, 0, 0, 2);
    c(jv, kv) = value_at_vertex(mesh, dof, q[m]);
    auto [je, ke] = anchored_index(m, 1, 0, 2);
    c(je, ke) = value_at_edge(mesh, dof, mesh.face_edge(target, m));
  }
  c(1, 1) = (dof.kind == DofKind::Face && dof.entity == target) ? 1.0 : 0.0;
  return c;
}

Eigen::Matrix3d face_spline_coeffs(const QuadMesh& mesh, int face_dof, int target) {
  return spline_coeffs(mesh, {DofKind::Face, face_dof, 0}, target);
}

Eigen::Matrix3d boundary_edge_spline_coeffs(const QuadMesh& mesh, int edge_dof, int target) {
  return spline_coeffs(mesh, {DofKind::BoundaryEdge, edge_dof, 0}, target);
}

Eigen::Matrix3d corner_vertex_spline_coeffs(const QuadMesh& mesh, int vertex_dof, int target) {
  return spline_coeffs(mesh, {DofKind::Corner, vertex_dof, 0}, target);
}

ExtractionTable assemble_extraction_star(const QuadMesh& mesh) {
  const auto& cls = mesh.classification();
  ExtractionTable table;
  table.dofs = dof_set_star(mesh);
  table.rebuild_index();
  table.faces.resize(mesh.num_faces());
  for (int f = 0; f < mesh.num_faces(); ++f) {
    std::set<int> active;
    for (int v : mesh.face(f)) {
      for (int g : mesh.vertex_faces(v)) active.insert(table.index_of({DofKind::Face, g, 0}));
      for (int e : mesh.vertex_edges(v))
        if (cls.boundary_edge[e]) active.insert(table.index_of({DofKind::BoundaryEdge, e, 0}));
      if (cls.corner_vertex[v]) active.insert(table.index_of({DofKind::Corner, v, 0}));
    }
    FaceRecord& rec = table.faces[f];
    rec.extraordinary = false;
    rec.degree_index = 2;
    for (int d : active) {
      Eigen::Matrix3d c = spline_coeffs(mesh, table.dofs[d], f);
      if (c.isZero(0.0)) continue;
      FaceEntry entry;
      entry.dof = d;
      entry.coeffs.topLeftCorner<3, 3>() = c;
      rec.entries.push_back(entry);
    }
  }
  return table;
}

Eigen::Matrix4d face_net(const ExtractionTable& table, const std::vector<double>& coeffs, int face) {
  if (face < 0 || face >= static_cast<int>(table.faces.size()))
    throw Error(ErrorCode::FaceOutOfRange, "face " + std::to_string(face));
  Eigen::Matrix4d net = Eigen::Matrix4d::Zero();
  for (const auto& e : table.faces[face].entries) net += coeffs[e.dof] * e.coeffs;
  return net;
}

double eval_bstar(const ExtractionTable& table, const std::vector<double>& coeffs, int face, const Vec2& xi) {
  const Eigen::Matrix4d net = face_net(table, coeffs, face);
  const int n = table.faces[face].degree_index;
  return net.cwiseProduct(tensor_basis(n, xi).value).sum();
}

}  // namespace ac1
