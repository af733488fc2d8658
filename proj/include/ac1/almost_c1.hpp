#pragma once

#include "ac1/bstar.hpp"
#include "ac1/triangle.hpp"

#include <map>
#include <memory>

namespace ac1 {

enum class SpaceMode { Geometric, Template };

// Control points aligned with the dof list of a table, plus per-EV normals.
// Points are stored in 3D; planar geometries (dim = 2) keep z = 0 and use the
// out-of-plane axis as normal.
struct Geometry {
  int dim = 2;
  std::vector<Vec3> points;
  std::map<int, Vec3> ev_normals;
};

// Vector-valued coefficient net on one face: one 4x4 matrix per coordinate.
using VectorNet = std::array<Eigen::Matrix4d, 3>;

VectorNet vector_net(const ExtractionTable& table, const std::vector<Vec3>& points, int face);
Vec3 net_point(const VectorNet& net, int j, int k);

// Orthonormal frame of the tangent plane at an extraordinary vertex.
struct TangentFrame {
  Vec3 origin = Vec3::Zero();
  Vec3 t1 = Vec3::UnitX(), t2 = Vec3::UnitY(), n = Vec3::UnitZ();
  Vec2 project(const Vec3& p) const { return {(p - origin).dot(t1), (p - origin).dot(t2)}; }
  Vec3 lift(const Vec2& q) const { return origin + q.x() * t1 + q.y() * t2; }
};

// Projected corner-block points of one ring face, in the frame anchored at the
// vertex: index 0 -> (0,0), 1 -> (1,0), 2 -> (0,1), 3 -> (1,1).
using BlockPoints = std::array<Vec2, 4>;
inline constexpr int kBlockA[4] = {0, 1, 0, 1};
inline constexpr int kBlockB[4] = {0, 0, 1, 1};

// Barycentric weights of the block points of each ring face: [face][point][nu].
using BlockWeights = std::vector<std::array<std::array<double, 3>, 4>>;

struct EvData {
  int vertex = -1;
  int valence = 0;
  bool boundary = false;
  bool from_template = false;
  std::vector<RingEntry> ring;
  TangentFrame frame;
  std::vector<BlockPoints> points;   // projected block points of the geometry
  ControlTriangle triangle;          // in tangent coordinates (or the template plane)
  std::array<Vec3, 3> anchors;       // control points of the three EV dofs
  BlockWeights weights;              // entries of the three EV splines
};

struct SplineSpace {
  std::shared_ptr<const QuadMesh> mesh;
  ExtractionTable table;             // the almost-C1 space
  ExtractionTable star;              // the mixed-smoothness space it is derived from
  std::vector<DofId> eliminated;     // star dofs dropped because all their vertices are extraordinary
  std::vector<EvData> evs;           // ordered by vertex id
  SpaceMode mode = SpaceMode::Geometric;
  TriangleStrategy boundary_strategy = TriangleStrategy::BoundaryAdapted;

  const QuadMesh& topo() const { return *mesh; }
  int num_dofs() const { return table.num_dofs(); }
};

// Truncation masks T_1..T_4: all ones except the 2x2 block at vertex i.
std::array<Eigen::Matrix4d, 4> truncation_matrices();

// K c K^T masked by the truncation of every flagged vertex.
Eigen::Matrix4d subdivide_truncate(const Eigen::Matrix3d& c, const std::array<bool, 4>& ev_flags);

// Knot-inserted net of the star geometry on every ring face, anchored at the vertex.
std::vector<VectorNet> ring_nets(const QuadMesh& mesh, const ExtractionTable& star, const std::vector<Vec3>& xstar,
                                 const std::vector<RingEntry>& ring);

// Corner-block coefficient (a, b) of a ring face, in the frame anchored at the vertex.
Vec3 ring_block_point(const VectorNet& hat, const RingEntry& entry, int a, int b);

Vec3 default_normal(const std::vector<RingEntry>& ring, const std::vector<VectorNet>& hat_nets);

TangentFrame tangent_frame(const std::vector<RingEntry>& ring, const std::vector<VectorNet>& hat_nets, const Vec3& n);

std::vector<BlockPoints> tangent_projection(const TangentFrame& frame, const std::vector<RingEntry>& ring,
                                            const std::vector<VectorNet>& hat_nets);

// Barycentric weights of every block point. Tiny negative rounding is clamped;
// genuinely negative weights raise NegativeBarycentric.
BlockWeights ev_spline_coeffs(const ControlTriangle& triangle, const std::vector<BlockPoints>& points);

// Geometry-independent configuration and weights for template mode.
struct EvTemplate {
  int valence = 0;
  bool boundary = false;
  std::vector<BlockPoints> points;  // template-plane block points
  ControlTriangle triangle;
  BlockWeights weights;
};

// Regular configuration: unit spokes, face points at the sum of adjacent spokes.
// Interior rings place face i at angle 2*pi*i/mu; boundary fans span a half plane.
EvTemplate regular_template(int valence, bool boundary);

// Templates used by template mode. Interior valences 3, 5 and 6 come from the
// stored closed-form tables; all others from regular_template.
EvTemplate ev_templates(int valence, bool boundary);

// Stored closed-form weights for interior valences 3, 5, 6 (empty otherwise).
std::optional<BlockWeights> stored_template_weights(int valence);

struct BuildOptions {
  SpaceMode mode = SpaceMode::Geometric;
  // Strategy for boundary extraordinary vertices; interior ones always use MinArea.
  TriangleStrategy boundary_strategy = TriangleStrategy::BoundaryAdapted;
};

struct BuildResult {
  SplineSpace space;
  Geometry geometry;
};

// xstar: control points aligned with dof_set_star(mesh). Missing EV normals are
// replaced by default_normal (or the out-of-plane axis for planar input).
BuildResult build_space(std::shared_ptr<const QuadMesh> mesh, const Geometry& xstar, const BuildOptions& opts = {});

// Control net of the mixed-smoothness space from mesh positions: face centroid,
// boundary-edge midpoint, corner position.
Geometry default_control_net(const QuadMesh& mesh);

// Dimension formula for the almost-C1 space when no dof is eliminated.
int dimension_formula(const QuadMesh& mesh);

}  // namespace ac1
