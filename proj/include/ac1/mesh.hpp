#pragma once

#include "ac1/common.hpp"

#include <array>
#include <optional>
#include <utility>
#include <vector>

namespace ac1 {

using Quad = std::array<int, 4>;

struct MeshEdge {
  int v0 = -1, v1 = -1;               // v0 < v1
  int num_faces = 0;                  // 1 (boundary) or 2 (interior)
  std::array<int, 2> faces{-1, -1};   // incident faces
  std::array<int, 2> local{-1, -1};   // local edge index inside each incident face
};

struct MeshClassification {
  std::vector<int> valence;                 // faces per vertex
  std::vector<bool> boundary_vertex;
  std::vector<bool> boundary_edge;
  std::vector<bool> corner_vertex;
  std::vector<bool> extraordinary_vertex;
  std::vector<bool> spoke_edge;
  std::vector<bool> extraordinary_face;

  std::vector<int> boundary_vertices() const;
  std::vector<int> interior_vertices() const;
  std::vector<int> boundary_edges() const;
  std::vector<int> interior_edges() const;
  std::vector<int> corner_vertices() const;
  std::vector<int> extraordinary_vertices() const;
  std::vector<int> spoke_edges() const;
  std::vector<int> extraordinary_faces() const;
};

// Face incident to a vertex, with the local index (0..3) of that vertex in the face.
struct RingEntry {
  int face = -1;
  int local = -1;
};

// Immutable quad mesh. Each face lists its vertices counter-clockwise with the
// smallest vertex id first; local edge m runs from vertex m to vertex m+1.
class QuadMesh {
 public:
  int num_vertices() const { return static_cast<int>(vertex_faces_.size()); }
  int num_faces() const { return static_cast<int>(faces_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  const std::vector<Quad>& faces() const { return faces_; }
  const Quad& face(int f) const { return faces_.at(f); }
  const std::vector<MeshEdge>& edges() const { return edges_; }
  const MeshEdge& edge(int e) const { return edges_.at(e); }
  int face_edge(int f, int m) const { return face_edges_[f][m]; }
  const std::vector<int>& vertex_faces(int v) const { return vertex_faces_[v]; }
  const std::vector<int>& vertex_edges(int v) const { return vertex_edges_[v]; }
  int find_edge(int a, int b) const;  // -1 when absent

  bool has_positions() const { return !positions_.empty(); }
  const std::vector<Vec3>& positions() const { return positions_; }
  const std::vector<int>& designated_corners() const { return designated_corners_; }
  const MeshClassification& classification() const { return cls_; }

  // Local index of vertex v in face f, or -1.
  int local_index(int f, int v) const;
  // Face on the other side of local edge m of face f, or -1 on the boundary.
  int neighbor(int f, int m) const;

  friend QuadMesh build_mesh(int, const std::vector<Quad>&, const std::vector<int>&,
                             const std::vector<Vec3>&);

 private:
  std::vector<Quad> faces_;
  std::vector<MeshEdge> edges_;
  std::vector<std::array<int, 4>> face_edges_;
  std::vector<std::vector<int>> vertex_faces_;
  std::vector<std::vector<int>> vertex_edges_;
  std::vector<Vec3> positions_;
  std::vector<int> designated_corners_;
  MeshClassification cls_;
};

// Validates, orients and anchors the faces. Positions may be empty.
QuadMesh build_mesh(int num_vertices, const std::vector<Quad>& faces,
                    const std::vector<int>& designated_corners = {},
                    const std::vector<Vec3>& positions = {});

MeshClassification classify(const QuadMesh& mesh);

// Counter-clockwise fan of faces around v. Boundary fans start at the face whose
// outgoing local edge at v lies on the boundary; interior fans start at the
// incident face of smallest id.
std::vector<RingEntry> one_ring(const QuadMesh& mesh, int v);

struct RefinementMap {
  struct FaceParent {
    int face;
    int child;  // 0..3: quadrant at the parent's local vertex 0..3
  };
  struct EdgeParent {
    int edge;
    int half;  // 0: half containing the start vertex of the owning face's local edge
  };
  std::vector<FaceParent> parent_face;         // indexed by refined face
  std::vector<std::optional<EdgeParent>> parent_edge;  // indexed by refined edge (boundary only)
  std::vector<int> vertex_carry;               // coarse vertex -> refined vertex (identity)
  int edge_vertex_offset = 0;                  // refined id of the midpoint of coarse edge e: offset + e
  int face_vertex_offset = 0;                  // refined id of the center of coarse face f: offset + f
};

std::pair<QuadMesh, RefinementMap> refine_topology(const QuadMesh& mesh);

// Index of the child face of coarse face f that holds the quadrant at local vertex m.
inline int child_face(int f, int m) { return 4 * f + m; }

// Local-frame helpers. Coefficient grids have size (n+1)x(n+1) with n = 2 or 3.
// (a, b) are indices in the frame anchored at local vertex m (a along edge m,
// b along the reversed edge m-1); the result is (j, k) in the face frame.
std::pair<int, int> anchored_index(int m, int a, int b, int n);
// Parametric point in the face frame for parameters (s, t) of the frame anchored at vertex m.
Vec2 anchored_param(int m, double s, double t);
// Inverse of anchored_param.
Vec2 to_anchored_param(int m, const Vec2& xi);
// Point on local edge m at fraction t from its start vertex.
Vec2 edge_param(int m, double t);
// Unit parametric direction pointing into the face, transversal to local edge m.
Vec2 edge_inward(int m);
// Unit parametric direction along local edge m.
Vec2 edge_tangent(int m);

// Fixtures.
// mu quads fanned around one interior vertex. The domain is the regular mu-gon
// circumscribed about the unit circle; spokes end at the tangent points.
QuadMesh disk_mesh(int mu);
// nx-by-ny structured grid on [0,nx]x[0,ny].
QuadMesh grid_mesh(int nx, int ny);
// Quad mesh obtained by splitting every polygon into quads at its centroid and
// edge midpoints; n-gons become valence-n interior vertices.
QuadMesh split_polygons(const std::vector<Vec3>& points, const std::vector<std::vector<int>>& polygons,
                        const std::vector<int>& designated_corners = {});
// Planar mixed mesh with interior vertices of valence 3 and 5, a boundary
// vertex of valence 3 and corner vertices.
QuadMesh mixed_mesh();

}  // namespace ac1
