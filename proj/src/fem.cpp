#include "ac1/fem.hpp"

#include "ac1/evaluation.hpp"
#include "ac1/refine.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <set>

namespace ac1 {

namespace {

constexpr double kPi = 3.14159265358979323846;

Vec2 xy(const Vec3& p) { return p.head<2>(); }

// Boundary quadrature point with everything the boundary systems need.
struct BoundaryPoint {
  BasisEval basis;
  PhysicalFrame frame;
  double weight = 0.0;  // ds * Gauss weight
  Vec2 normal;          // outward unit normal
};

template <class F>
void for_each_boundary_point(const SplineSpace& space, const Geometry& geometry, int q, F&& fn) {
  const QuadMesh& mesh = space.topo();
  std::vector<double> nodes, weights;
  gauss_legendre(q, nodes, weights);
  for (int e : mesh.classification().boundary_edges()) {
    const auto& edge = mesh.edge(e);
    const int f = edge.faces[0], m = edge.local[0];
    const int pieces = space.table.faces[f].extraordinary ? 2 : 1;
    for (int p = 0; p < pieces; ++p)
      for (int i = 0; i < q; ++i) {
        const double t = (p + nodes[i]) / pieces;
        BoundaryPoint bp;
        const Vec2 xi = edge_param(m, t);
        bp.basis = eval_basis(space.table, f, xi);
        bp.frame = eval_geometry(space.table, geometry.points, f, xi);
        const Vec2 tangent = bp.frame.jac.topRows<2>() * edge_tangent(m);
        const double len = tangent.norm();
        bp.weight = weights[i] / pieces * len;
        bp.normal = Vec2(tangent.y(), -tangent.x()) / len;
        if (bp.frame.det < 0.0) bp.normal = -bp.normal;
        fn(bp);
      }
  }
}

Eigen::SparseMatrix<double> symmetric_from_lower(int n, const std::vector<Eigen::Triplet<double>>& lower) {
  Eigen::SparseMatrix<double> l(n, n);
  l.setFromTriplets(lower.begin(), lower.end());
  Eigen::SparseMatrix<double> lt = l.transpose();
  Eigen::SparseMatrix<double> a = l + lt;
  a.diagonal() -= l.diagonal();
  a.prune(0.0);
  return a;
}

Eigen::SparseMatrix<double> submatrix(const Eigen::SparseMatrix<double>& a, const std::vector<int>& map, int n) {
  std::vector<Eigen::Triplet<double>> trip;
  for (int c = 0; c < a.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(a, c); it; ++it)
      if (map[it.row()] >= 0 && map[it.col()] >= 0) trip.emplace_back(map[it.row()], map[it.col()], it.value());
  Eigen::SparseMatrix<double> s(n, n);
  s.setFromTriplets(trip.begin(), trip.end());
  return s;
}

double dot_normal(const Vec2& g, const Vec2& n) { return g.dot(n); }

}  // namespace

void gauss_legendre(int q, std::vector<double>& nodes, std::vector<double>& weights) {
  if (q < 1) throw Error(ErrorCode::InvalidArgument, "quadrature order must be positive");
  nodes.assign(q, 0.0);
  weights.assign(q, 0.0);
  for (int i = 0; i < q; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (q + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      const double p = std::legendre(q, x);
      const double pm = q > 1 ? std::legendre(q - 1, x) : 1.0;
      dp = q * (x * p - pm) / (x * x - 1.0);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double p = std::legendre(q, x), pm = q > 1 ? std::legendre(q - 1, x) : 1.0;
    dp = q * (x * p - pm) / (x * x - 1.0);
    nodes[q - 1 - i] = 0.5 * (x + 1.0);
    weights[q - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);  // (2 / ((1-x^2) P'^2)) / 2
  }
}

QuadratureRule face_rule(bool extraordinary, int q) {
  std::vector<double> x, w;
  gauss_legendre(q, x, w);
  QuadratureRule rule;
  const int pieces = extraordinary ? 2 : 1;
  const double h = 1.0 / pieces;
  for (int pu = 0; pu < pieces; ++pu)
    for (int pv = 0; pv < pieces; ++pv)
      for (int i = 0; i < q; ++i)
        for (int j = 0; j < q; ++j) {
          rule.points.emplace_back((pu + x[i]) * h, (pv + x[j]) * h);
          rule.weights.push_back(w[i] * w[j] * h * h);
        }
  return rule;
}

ExactSolution manufactured_solution() {
  ExactSolution s;
  const double a = kPi / 3.0, b = kPi / 5.0;
  s.value = [=](const Vec2& p) { return std::sin(kPi * p.x() + a) * std::sin(kPi * p.y() + b); };
  s.grad = [=](const Vec2& p) {
    const double sx = std::sin(kPi * p.x() + a), cx = std::cos(kPi * p.x() + a);
    const double sy = std::sin(kPi * p.y() + b), cy = std::cos(kPi * p.y() + b);
    return Vec2(kPi * cx * sy, kPi * sx * cy);
  };
  s.hess = [=](const Vec2& p) {
    const double sx = std::sin(kPi * p.x() + a), cx = std::cos(kPi * p.x() + a);
    const double sy = std::sin(kPi * p.y() + b), cy = std::cos(kPi * p.y() + b);
    Eigen::Matrix2d h;
    h << -kPi * kPi * sx * sy, kPi * kPi * cx * cy, kPi * kPi * cx * cy, -kPi * kPi * sx * sy;
    return h;
  };
  auto value = s.value;
  s.laplacian = [=](const Vec2& p) { return -2.0 * kPi * kPi * value(p); };
  s.bilaplacian = [=](const Vec2& p) { return 4.0 * std::pow(kPi, 4) * value(p); };
  return s;
}

Eigen::SparseMatrix<double> assemble(const SplineSpace& space, const Geometry& geometry, Form form, int q) {
  const int n = space.num_dofs();
  std::vector<Eigen::Triplet<double>> lower;
  const QuadratureRule regular = face_rule(false, q), extraordinary = face_rule(true, q);
  for (int f = 0; f < space.topo().num_faces(); ++f) {
    const FaceRecord& rec = space.table.faces[f];
    const QuadratureRule& rule = rec.extraordinary ? extraordinary : regular;
    const int nl = static_cast<int>(rec.entries.size());
    Eigen::MatrixXd local = Eigen::MatrixXd::Zero(nl, nl);
    for (size_t p = 0; p < rule.points.size(); ++p) {
      const BasisEval b = eval_basis(space.table, f, rule.points[p]);
      const PhysicalFrame fr = eval_geometry(space.table, geometry.points, f, rule.points[p]);
      const double w = rule.weights[p] * std::abs(fr.det);
      Eigen::VectorXd d(nl);
      if (form == Form::Mass) {
        for (int i = 0; i < nl; ++i) d[i] = b.value[i];
        local += w * d * d.transpose();
        if (std::abs(fr.det) == 0.0) throw Error(ErrorCode::SingularJacobian, "Jacobian determinant vanishes");
        continue;
      }
      const PhysicalBasis pb = physical_basis(fr, b);
      if (form == Form::Stiffness) {
        Eigen::MatrixXd g(2, nl);
        for (int i = 0; i < nl; ++i) g.col(i) = pb.grad[i];
        local += w * g.transpose() * g;
      } else {
        for (int i = 0; i < nl; ++i) d[i] = pb.hess[i].trace();
        local += w * d * d.transpose();
      }
    }
    for (int i = 0; i < nl; ++i)
      for (int j = 0; j < nl; ++j) {
        const int r = rec.entries[i].dof, c = rec.entries[j].dof;
        if (r >= c) lower.emplace_back(r, c, local(i, j));
      }
  }
  return symmetric_from_lower(n, lower);
}

Eigen::VectorXd assemble_load(const SplineSpace& space, const Geometry& geometry,
                              const std::function<double(const Vec2&)>& source, int q) {
  Eigen::VectorXd b = Eigen::VectorXd::Zero(space.num_dofs());
  const QuadratureRule regular = face_rule(false, q), extraordinary = face_rule(true, q);
  for (int f = 0; f < space.topo().num_faces(); ++f) {
    const QuadratureRule& rule = space.table.faces[f].extraordinary ? extraordinary : regular;
    for (size_t p = 0; p < rule.points.size(); ++p) {
      const BasisEval be = eval_basis(space.table, f, rule.points[p]);
      const PhysicalFrame fr = eval_geometry(space.table, geometry.points, f, rule.points[p]);
      const double w = rule.weights[p] * std::abs(fr.det) * source(xy(fr.x));
      for (size_t i = 0; i < be.dofs.size(); ++i) b[be.dofs[i]] += w * be.value[i];
    }
  }
  return b;
}

BoundaryDofs boundary_dofs(const SplineSpace& space) {
  const QuadMesh& mesh = space.topo();
  std::set<int> trace, row1;
  for (int e : mesh.classification().boundary_edges()) {
    const auto& edge = mesh.edge(e);
    const int f = edge.faces[0], m = edge.local[0];
    const FaceRecord& rec = space.table.faces[f];
    const int n = rec.degree_index;
    for (const auto& entry : rec.entries)
      for (int a = 0; a <= n; ++a) {
        auto [j0, k0] = anchored_index(m, a, 0, n);
        auto [j1, k1] = anchored_index(m, a, 1, n);
        if (entry.coeffs(j0, k0) != 0.0) trace.insert(entry.dof);
        if (entry.coeffs(j1, k1) != 0.0) row1.insert(entry.dof);
      }
  }
  BoundaryDofs out;
  out.trace.assign(trace.begin(), trace.end());
  for (int d : row1)
    if (!trace.count(d)) out.layer.push_back(d);
  return out;
}

Eigen::VectorXd boundary_value_projection(const SplineSpace& space, const Geometry& geometry,
                                          const std::function<double(const Vec2&)>& g, int q) {
  const BoundaryDofs bd = boundary_dofs(space);
  std::vector<int> index(space.num_dofs(), -1);
  for (size_t i = 0; i < bd.trace.size(); ++i) index[bd.trace[i]] = static_cast<int>(i);
  const int nt = static_cast<int>(bd.trace.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(nt, nt);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nt);
  for_each_boundary_point(space, geometry, q, [&](const BoundaryPoint& bp) {
    const double gv = g(xy(bp.frame.x));
    for (size_t i = 0; i < bp.basis.dofs.size(); ++i) {
      const int a = index[bp.basis.dofs[i]];
      if (a < 0) continue;
      rhs[a] += bp.weight * bp.basis.value[i] * gv;
      for (size_t j = 0; j < bp.basis.dofs.size(); ++j) {
        const int b = index[bp.basis.dofs[j]];
        if (b >= 0) m(a, b) += bp.weight * bp.basis.value[i] * bp.basis.value[j];
      }
    }
  });
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success || llt.rcond() < 1e-14)
    throw Error(ErrorCode::SingularBoundaryMass, "boundary mass matrix is singular");
  const Eigen::VectorXd c = llt.solve(rhs);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(space.num_dofs());
  for (int i = 0; i < nt; ++i) out[bd.trace[i]] = c[i];
  return out;
}

NormalProjection boundary_normal_projection(const SplineSpace& space, const Geometry& geometry,
                                            const Eigen::VectorXd& f0,
                                            const std::function<double(const Vec2&, const Vec2&)>& gn, int q) {
  const BoundaryDofs bd = boundary_dofs(space);
  std::vector<int> index(space.num_dofs(), -1);
  for (size_t i = 0; i < bd.layer.size(); ++i) index[bd.layer[i]] = static_cast<int>(i);
  const int nl = static_cast<int>(bd.layer.size());
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(nl, nl);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nl);
  for_each_boundary_point(space, geometry, q, [&](const BoundaryPoint& bp) {
    const PhysicalBasis pb = physical_basis(bp.frame, bp.basis);
    const size_t nb = bp.basis.dofs.size();
    std::vector<double> dn(nb);
    double fixed = 0.0;
    for (size_t i = 0; i < nb; ++i) {
      dn[i] = dot_normal(pb.grad[i], bp.normal);
      fixed += f0[bp.basis.dofs[i]] * dn[i];
    }
    const double target = gn(xy(bp.frame.x), bp.normal) - fixed;
    for (size_t i = 0; i < nb; ++i) {
      const int a = index[bp.basis.dofs[i]];
      if (a < 0) continue;
      rhs[a] += bp.weight * dn[i] * target;
      for (size_t j = 0; j < nb; ++j) {
        const int b = index[bp.basis.dofs[j]];
        if (b >= 0) g(a, b) += bp.weight * dn[i] * dn[j];
      }
    }
  });
  NormalProjection out;
  out.coeffs = Eigen::VectorXd::Zero(space.num_dofs());
  Eigen::VectorXd c;
  Eigen::LLT<Eigen::MatrixXd> llt(g);
  if (nl > 0 && llt.info() == Eigen::Success && llt.rcond() > 1e-12) {
    c = llt.solve(rhs);
    out.rank = nl;
  } else if (nl > 0) {
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(g);
    cod.setThreshold(1e-12);
    c = cod.solve(rhs);
    out.rank = static_cast<int>(cod.rank());
    out.rank_deficient = out.rank < nl;
  }
  for (int i = 0; i < nl; ++i) out.coeffs[bd.layer[i]] = c[i];
  return out;
}

ErrorNorms error_norms(const SplineSpace& space, const Geometry& geometry, const Eigen::VectorXd& coeffs,
                       const ExactSolution& exact, int q) {
  double e0 = 0.0, e1 = 0.0, e2 = 0.0;
  const QuadratureRule regular = face_rule(false, q), extraordinary = face_rule(true, q);
  for (int f = 0; f < space.topo().num_faces(); ++f) {
    const QuadratureRule& rule = space.table.faces[f].extraordinary ? extraordinary : regular;
    for (size_t p = 0; p < rule.points.size(); ++p) {
      const BasisEval b = eval_basis(space.table, f, rule.points[p]);
      const PhysicalFrame fr = eval_geometry(space.table, geometry.points, f, rule.points[p]);
      const PhysicalBasis pb = physical_basis(fr, b);
      double v = 0.0;
      Vec2 g = Vec2::Zero();
      Eigen::Matrix2d h = Eigen::Matrix2d::Zero();
      for (size_t i = 0; i < b.dofs.size(); ++i) {
        const double c = coeffs[b.dofs[i]];
        v += c * b.value[i];
        g += c * pb.grad[i];
        h += c * pb.hess[i];
      }
      const Vec2 x = xy(fr.x);
      const double w = rule.weights[p] * std::abs(fr.det);
      const double dv = v - exact.value(x);
      const double dg = (g - exact.grad(x)).squaredNorm();
      const double dh = (h - exact.hess(x)).squaredNorm();
      e0 += w * dv * dv;
      e1 += w * dg;
      e2 += w * dh;
    }
  }
  ErrorNorms out;
  out.l2 = std::sqrt(e0);
  out.h1 = std::sqrt(e0 + e1);
  out.h2 = std::sqrt(e0 + e1 + e2);
  return out;
}

double condition_number(const Eigen::SparseMatrix<double>& a, const ConditionOptions& opts) {
  const int n = static_cast<int>(a.rows());
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "empty matrix");
  std::mt19937 rng(opts.seed);
  std::uniform_real_distribution<double> dist(0.5, 1.5);
  Eigen::VectorXd start(n);
  for (int i = 0; i < n; ++i) start[i] = dist(rng);
  start.normalize();

  double lmax = 0.0;
  {
    Eigen::VectorXd v = start;
    bool done = false;
    for (int it = 0; it < opts.max_iter && !done; ++it) {
      Eigen::VectorXd w = a * v;
      const double lambda = v.dot(w);
      done = it > 0 && std::abs(lambda - lmax) <= opts.tol * std::abs(lambda);
      lmax = lambda;
      v = w / w.norm();
    }
    if (!done) throw Error(ErrorCode::NoConvergence, "power iteration did not converge");
  }
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(a);
  if (ldlt.info() != Eigen::Success) throw Error(ErrorCode::SolverBreakdown, "factorization failed");
  double lmin = 0.0;
  {
    Eigen::VectorXd v = start;
    bool done = false;
    for (int it = 0; it < opts.max_iter && !done; ++it) {
      Eigen::VectorXd w = ldlt.solve(v);
      v = w / w.norm();
      const double lambda = v.dot(a * v);
      done = it > 0 && std::abs(lambda - lmin) <= opts.tol * std::abs(lambda);
      lmin = lambda;
    }
    if (!done) throw Error(ErrorCode::NoConvergence, "inverse iteration did not converge");
  }
  return lmax / lmin;
}

Solution solve_problem(const SplineSpace& space, const Geometry& geometry, Problem problem, const ExactSolution& exact,
                       const SolveOptions& opts) {
  if (problem == Problem::P2) {
    // Without EV splines the space is only C0 across spoke edges.
    const bool has_ev_dofs = std::any_of(space.table.dofs.begin(), space.table.dofs.end(),
                                         [](const DofId& d) { return d.kind == DofKind::EV; });
    if (!space.topo().classification().extraordinary_vertices().empty() && !has_ev_dofs)
      throw Error(ErrorCode::InvalidArgument, "the biharmonic problem needs a space with EV splines");
  }
  const int n = space.num_dofs();
  Solution sol;
  sol.n = n;
  const BoundaryDofs bd = boundary_dofs(space);
  Eigen::VectorXd fixed = boundary_value_projection(space, geometry, exact.value, opts.quad);
  std::vector<bool> constrained(n, false);
  for (int d : bd.trace) constrained[d] = true;
  if (problem == Problem::P2) {
    auto gn = [&](const Vec2& x, const Vec2& nrm) { return exact.grad(x).dot(nrm); };
    const NormalProjection np = boundary_normal_projection(space, geometry, fixed, gn, opts.quad);
    sol.layer_rank_deficient = np.rank_deficient;
    fixed += np.coeffs;
    for (int d : bd.layer) constrained[d] = true;
  }
  const Form form = problem == Problem::P1 ? Form::Stiffness : Form::Bilaplace;
  const Eigen::SparseMatrix<double> a = assemble(space, geometry, form, opts.quad);
  Eigen::VectorXd load = problem == Problem::P1
                             ? assemble_load(space, geometry, [&](const Vec2& x) { return -exact.laplacian(x); }, opts.quad)
                             : assemble_load(space, geometry, exact.bilaplacian, opts.quad);
  load -= a * fixed;

  std::vector<int> map(n, -1), free;
  for (int i = 0; i < n; ++i)
    if (!constrained[i]) {
      map[i] = static_cast<int>(free.size());
      free.push_back(i);
    }
  const int nf = static_cast<int>(free.size());
  sol.free = nf;
  sol.coeffs = fixed;
  if (nf == 0) return sol;
  const Eigen::SparseMatrix<double> aff = submatrix(a, map, nf);
  Eigen::VectorXd rhs(nf);
  for (int i = 0; i < nf; ++i) rhs[i] = load[free[i]];

  Eigen::VectorXd x;
  bool ok = false;
  if (opts.solver == SolverKind::Direct) {
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(aff);
    ok = ldlt.info() == Eigen::Success;
    if (ok) {
      x = ldlt.solve(rhs);
      ok = ldlt.info() == Eigen::Success && x.allFinite();
    }
  }
  if (!ok) {
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg(aff);
    cg.setTolerance(1e-12);
    cg.setMaxIterations(std::max(1000, 10 * nf));
    x = cg.solve(rhs);
    if (cg.info() != Eigen::Success) throw Error(ErrorCode::SolverBreakdown, "conjugate gradients failed");
    sol.used_cg = true;
  }
  const double rn = rhs.norm();
  sol.residual = (aff * x - rhs).norm() / (rn > 0.0 ? rn : 1.0);
  for (int i = 0; i < nf; ++i) sol.coeffs[free[i]] = x[i];
  if (opts.condition) sol.kappa = condition_number(aff, opts.cond);
  return sol;
}

double observed_rate(double e0, int n0, double e1, int n1) {
  return std::log(e0 / e1) / std::log(std::sqrt(static_cast<double>(n1) / n0));
}

ConvergenceRecord convergence_study(const SplineSpace& space, const Geometry& geometry, Problem problem,
                                    const StudyOptions& opts) {
  if (opts.levels < 1) throw Error(ErrorCode::InvalidArgument, "study needs at least one level");
  ConvergenceRecord rec;
  rec.problem = problem;
  const ExactSolution exact = manufactured_solution();
  RefineResult cur = refine_geometry(space, geometry);
  for (int level = 0; level < opts.levels; ++level) {
    if (level > 0) cur = refine_geometry(cur.built.space, cur.built.geometry);
    const SplineSpace& s = cur.built.space;
    const Geometry& g = cur.built.geometry;
    const Solution sol = solve_problem(s, g, problem, exact, opts.solve);
    ConvergenceLevel lv;
    lv.level = level;
    lv.n = sol.n;
    lv.err = error_norms(s, g, sol.coeffs, exact, opts.solve.quad);
    lv.kappa = sol.kappa;
    if (!rec.levels.empty()) {
      const auto& prev = rec.levels.back();
      lv.rate_l2 = observed_rate(prev.err.l2, prev.n, lv.err.l2, lv.n);
      lv.rate_h1 = observed_rate(prev.err.h1, prev.n, lv.err.h1, lv.n);
      lv.rate_h2 = observed_rate(prev.err.h2, prev.n, lv.err.h2, lv.n);
    }
    rec.levels.push_back(lv);
  }
  return rec;
}

ConvergenceRecord convergence_study(int valence, Problem problem, const StudyOptions& opts) {
  auto mesh = std::make_shared<const QuadMesh>(disk_mesh(valence));
  BuildOptions bo;
  bo.mode = opts.mode;
  bo.boundary_strategy = opts.boundary_strategy;
  const BuildResult coarse = build_space(mesh, default_control_net(*mesh), bo);
  ConvergenceRecord rec = convergence_study(coarse.space, coarse.geometry, problem, opts);
  rec.valence = valence;
  return rec;
}

void write_convergence_csv(std::ostream& out, const ConvergenceRecord& record) {
  auto num = [](std::optional<double> v) {
    if (!v) return std::string();
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", *v);
    return std::string(buf);
  };
  out << "level,n,err_L2,err_H1,err_H2,kappa,rate_L2,rate_H1,rate_H2\n";
  for (const auto& l : record.levels)
    out << l.level << ',' << l.n << ',' << num(l.err.l2) << ',' << num(l.err.h1) << ',' << num(l.err.h2) << ','
        << num(l.kappa) << ',' << num(l.rate_l2) << ',' << num(l.rate_h1) << ',' << num(l.rate_h2) << '\n';
}

std::vector<Vec3> fit_geometry(const SplineSpace& space, const std::function<Vec3(int, const Vec2&)>& target, int q) {
  const int n = space.num_dofs();
  std::vector<Eigen::Triplet<double>> lower;
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n, 3);
  const QuadratureRule regular = face_rule(false, q), extraordinary = face_rule(true, q);
  for (int f = 0; f < space.topo().num_faces(); ++f) {
    const QuadratureRule& rule = space.table.faces[f].extraordinary ? extraordinary : regular;
    for (size_t p = 0; p < rule.points.size(); ++p) {
      const BasisEval b = eval_basis(space.table, f, rule.points[p]);
      const Vec3 t = target(f, rule.points[p]);
      const double w = rule.weights[p];
      for (size_t i = 0; i < b.dofs.size(); ++i) {
        rhs.row(b.dofs[i]) += w * b.value[i] * t.transpose();
        for (size_t j = 0; j < b.dofs.size(); ++j)
          if (b.dofs[i] >= b.dofs[j]) lower.emplace_back(b.dofs[i], b.dofs[j], w * b.value[i] * b.value[j]);
      }
    }
  }
  const Eigen::SparseMatrix<double> m = symmetric_from_lower(n, lower);
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(m);
  if (ldlt.info() != Eigen::Success) throw Error(ErrorCode::SingularMass, "mass matrix factorization failed");
  const Eigen::VectorXd d = ldlt.vectorD();
  if (d.minCoeff() <= 1e-14 * d.maxCoeff()) throw Error(ErrorCode::SingularMass, "mass matrix is singular");
  const Eigen::MatrixXd x = ldlt.solve(rhs);
  std::vector<Vec3> out(n);
  for (int i = 0; i < n; ++i) out[i] = x.row(i).transpose();
  return out;
}

std::function<Vec3(int, const Vec2&)> bilinear_target(const QuadMesh& mesh) {
  if (!mesh.has_positions()) throw Error(ErrorCode::InvalidArgument, "mesh has no vertex positions");
  return [&mesh](int f, const Vec2& xi) {
    const auto& q = mesh.face(f);
    const auto& p = mesh.positions();
    const double u = xi.x(), v = xi.y();
    return Vec3((1 - u) * (1 - v) * p[q[0]] + u * (1 - v) * p[q[1]] + u * v * p[q[2]] + (1 - u) * v * p[q[3]]);
  };
}

}  // namespace ac1
