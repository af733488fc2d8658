#pragma once

#include "ac1/almost_c1.hpp"
#include "ac1/rational.hpp"

#include <Eigen/Sparse>

namespace ac1 {

using RationalMatrix = std::vector<std::vector<Rational>>;

// Circulant refinement stencils around an extraordinary vertex of valence mu.
// Interior: S (mu x mu) acts on the mu spoke coefficients, Q (mu x mu) on the
// face-diagonal ones. Boundary: S (mu x (mu-1)) acts on the mu-1 interior
// spokes, Q (mu x mu) on the diagonals, and R is the unsymmetrized S.
struct EvStencils {
  int valence = 0;
  bool boundary = false;
  RationalMatrix S, Q, R;
};

EvStencils ev_stencils(int valence, bool boundary);

// Element-local refinement: knot insertion for regular faces (3x3 block in),
// identity for extraordinary faces (already 4x4 C1 coefficients).
Eigen::Matrix4d refine_element_local(bool extraordinary, const Eigen::Matrix4d& c);

// Element-local coefficient slot: 16 per coarse face, index 16 f + 4 j + k.
inline int slot_index(int face, int j, int k) { return 16 * face + 4 * j + k; }

// Linear map from coarse dof control points to refined mixed-smoothness control
// points, factored as A = A_loc * E: E maps coarse dofs to the element-local
// refined coefficients, A_loc combines those exactly (rational weights).
struct TransferOperator {
  std::vector<DofId> rows;                                  // refined star dofs
  std::vector<std::vector<std::pair<int, Rational>>> local;  // row -> (slot, weight)
  std::vector<std::pair<int, int>> consistency;             // (row, slot) pairs that must agree with the row
  Eigen::SparseMatrix<double> slots_from_dofs;              // E: 16|T2| x n_coarse
  std::vector<bool> stencil_vertices;                       // coarse vertices refined with circulant stencils

  Eigen::SparseMatrix<double> matrix() const;               // A in floating point
  std::vector<Rational> local_row_sums() const;
  // Applies A and checks duplicate assignments (AmbiguousAssignment).
  std::vector<Vec3> apply(const std::vector<Vec3>& coarse) const;
};

// An extraordinary vertex qualifies for the circulant rule when no face of its
// 1-ring contains another extraordinary vertex.
std::vector<bool> stencil_qualifying(const QuadMesh& mesh);

TransferOperator build_transfer(const SplineSpace& space, const QuadMesh& fine, const RefinementMap& map);

// Refined star control points from coarse control points (the rows of build_transfer).
std::vector<Vec3> transfer_control_points(const SplineSpace& space, const QuadMesh& fine, const RefinementMap& map,
                                          const std::vector<Vec3>& coarse);

struct RefineResult {
  std::shared_ptr<const QuadMesh> mesh;
  RefinementMap map;
  TransferOperator transfer;
  Geometry xstar;          // refined mixed-smoothness geometry
  BuildResult built;       // refined almost-C1 space and geometry
  double transfer_gap = 0.0;  // max coefficient deviation between the refined geometry and xstar
};

// One global refinement of (mesh, space, geometry). EV normals are carried over.
RefineResult refine_geometry(const SplineSpace& space, const Geometry& geometry);

// Sup-differences between successive refinements, sampled at fixed points of
// the coarse parametric domain (samples x samples per coarse face).
struct LimitCheck {
  std::vector<double> differences;  // d_l for l = 0 .. levels-1
  std::vector<double> ratios;       // d_{l+1} / d_l (NaN when d_l = 0)
};

LimitCheck limit_check(const SplineSpace& space, const Geometry& geometry, int levels, int samples = 5);

// Refines `levels` times, returning the final result (levels >= 1).
RefineResult refine_levels(const SplineSpace& space, const Geometry& geometry, int levels);

}  // namespace ac1
