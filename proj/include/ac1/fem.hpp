#pragma once

#include "ac1/almost_c1.hpp"

#include <Eigen/Sparse>

#include <functional>
#include <iosfwd>
#include <optional>

namespace ac1 {

// Gauss-Legendre nodes and weights on [0, 1].
void gauss_legendre(int q, std::vector<double>& nodes, std::vector<double>& weights);

struct QuadratureRule {
  std::vector<Vec2> points;
  std::vector<double> weights;  // sum to 1
};

// q x q Gauss per polynomial piece: one piece on regular faces, the four
// quarter cells on extraordinary faces.
QuadratureRule face_rule(bool extraordinary, int q);

// Exact solution data for the model problems.
struct ExactSolution {
  std::function<double(const Vec2&)> value;
  std::function<Vec2(const Vec2&)> grad;
  std::function<Eigen::Matrix2d(const Vec2&)> hess;
  std::function<double(const Vec2&)> laplacian;
  std::function<double(const Vec2&)> bilaplacian;
};

// f(x, y) = sin(pi x + pi/3) sin(pi y + pi/5).
ExactSolution manufactured_solution();

enum class Form { Mass, Stiffness, Bilaplace };
enum class Problem { P1, P2 };

// Global matrix of a bilinear form on a planar geometry (lower triangle
// assembled and mirrored, so the result is exactly symmetric).
Eigen::SparseMatrix<double> assemble(const SplineSpace& space, const Geometry& geometry, Form form, int q = 4);

// Load vector: integral of B_phi * source over the physical domain.
Eigen::VectorXd assemble_load(const SplineSpace& space, const Geometry& geometry,
                              const std::function<double(const Vec2&)>& source, int q = 4);

// Dofs with a nonzero boundary trace, and the adjacent layer: non-trace dofs
// with a nonzero normal derivative on the boundary. Both sorted.
struct BoundaryDofs {
  std::vector<int> trace;
  std::vector<int> layer;
};
BoundaryDofs boundary_dofs(const SplineSpace& space);

// L2 projection of g onto the boundary trace dofs; other entries are zero.
Eigen::VectorXd boundary_value_projection(const SplineSpace& space, const Geometry& geometry,
                                          const std::function<double(const Vec2&)>& g, int q = 4);

// Galerkin fit of normal derivatives over the layer dofs, with the trace dofs
// fixed to f0. gn(point, outward unit normal) returns the target derivative.
struct NormalProjection {
  Eigen::VectorXd coeffs;       // full length; nonzero only on layer dofs
  bool rank_deficient = false;  // minimum-norm solve was needed
  int rank = 0;
};
NormalProjection boundary_normal_projection(const SplineSpace& space, const Geometry& geometry,
                                            const Eigen::VectorXd& f0,
                                            const std::function<double(const Vec2&, const Vec2&)>& gn, int q = 4);

struct ErrorNorms {
  double l2 = 0.0, h1 = 0.0, h2 = 0.0;  // full norms (seminorms plus lower-order terms)
};
ErrorNorms error_norms(const SplineSpace& space, const Geometry& geometry, const Eigen::VectorXd& coeffs,
                       const ExactSolution& exact, int q = 4);

struct ConditionOptions {
  double tol = 1e-6;
  int max_iter = 50000;
  unsigned seed = 7;
};

// kappa = lambda_max / lambda_min of an SPD matrix: power iteration for the
// largest eigenvalue, inverse iteration through a sparse LDL^T for the smallest.
double condition_number(const Eigen::SparseMatrix<double>& a, const ConditionOptions& opts = {});

enum class SolverKind { Direct, CG };

struct SolveOptions {
  int quad = 4;
  SolverKind solver = SolverKind::Direct;  // Direct falls back to CG on breakdown
  bool condition = false;
  ConditionOptions cond;
};

struct Solution {
  Eigen::VectorXd coeffs;
  int n = 0;                  // dimension of the space
  int free = 0;               // unknowns after constraints
  double residual = 0.0;      // relative residual of the constrained system
  std::optional<double> kappa;
  bool layer_rank_deficient = false;
  bool used_cg = false;
};

// Poisson (P1) or biharmonic (P2) with boundary data taken from `exact`.
Solution solve_problem(const SplineSpace& space, const Geometry& geometry, Problem problem, const ExactSolution& exact,
                       const SolveOptions& opts = {});

struct ConvergenceLevel {
  int level = 0;
  int n = 0;
  ErrorNorms err;
  std::optional<double> kappa;
  std::optional<double> rate_l2, rate_h1, rate_h2;  // against n^{-1/2}, from the previous level
};

struct ConvergenceRecord {
  int valence = 0;
  Problem problem = Problem::P1;
  std::vector<ConvergenceLevel> levels;
};

struct StudyOptions {
  int levels = 4;            // levels 0 .. levels-1; level i is the disk refined i+1 times
  SolveOptions solve;
  SpaceMode mode = SpaceMode::Geometric;
  TriangleStrategy boundary_strategy = TriangleStrategy::BoundaryAdapted;
};

// Convergence study on disk_mesh(valence) with the manufactured solution.
ConvergenceRecord convergence_study(int valence, Problem problem, const StudyOptions& opts);

// Study on an arbitrary starting (space, geometry): level i = i+1 refinements.
ConvergenceRecord convergence_study(const SplineSpace& space, const Geometry& geometry, Problem problem,
                                    const StudyOptions& opts);

// Observed rate between two levels against h ~ n^{-1/2}.
double observed_rate(double e0, int n0, double e1, int n1);

void write_convergence_csv(std::ostream& out, const ConvergenceRecord& record);

// Global L2 fit (in the parametric measure) of control points to a target map.
std::vector<Vec3> fit_geometry(const SplineSpace& space, const std::function<Vec3(int, const Vec2&)>& target,
                               int q = 4);

// Bilinear interpolation of the face corner positions: the default fit target.
std::function<Vec3(int, const Vec2&)> bilinear_target(const QuadMesh& mesh);

}  // namespace ac1
