// Command-line front end: info, refine, fit, solve, study, export.

#include "ac1/evaluation.hpp"
#include "ac1/fem.hpp"
#include "ac1/io.hpp"
#include "ac1/refine.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

namespace fs = std::filesystem;
using namespace ac1;

namespace {

enum Exit { kOk = 0, kOther = 1, kUsage = 2, kParse = 3, kInvalidMesh = 4, kNumerical = 5 };

struct RunConfig {
  std::string mesh;
  std::string sidecar;
  std::string mode = "geometric";  // geometric | template | star
  std::string triangle = "boundary-adapted";
  int levels = 0;  // uniform refinements (study: number of levels)
  std::string problem = "p1";
  int quad = 4;
  std::string solver = "direct";
  bool cond = false;
  std::string out = ".";
  unsigned seed = 7;
};

// Space and geometry at one level, optionally reduced to the mixed-smoothness space.
struct Level {
  SplineSpace space;
  Geometry geometry;
};

BuildOptions build_options(const RunConfig& cfg) {
  BuildOptions bo;
  bo.mode = cfg.mode == "template" ? SpaceMode::Template : SpaceMode::Geometric;
  bo.boundary_strategy =
      cfg.triangle == "min-area" ? TriangleStrategy::MinArea : TriangleStrategy::BoundaryAdapted;
  return bo;
}

BuildResult coarse_space(const RunConfig& cfg, const LoadedMesh& lm) {
  Geometry xstar = default_control_net(*lm.mesh);
  xstar.ev_normals = lm.normals;
  return build_space(lm.mesh, xstar, build_options(cfg));
}

Level star_level(const SplineSpace& space, const Geometry& xstar) {
  Level l{space, xstar};
  l.space.table = space.star;
  l.space.evs.clear();
  l.geometry.ev_normals.clear();
  return l;
}

// Refines `levels` times; keeps the mixed-smoothness view when mode is "star".
Level refined_level(const RunConfig& cfg, const LoadedMesh& lm) {
  const Geometry xstar0 = [&] {
    Geometry g = default_control_net(*lm.mesh);
    g.ev_normals = lm.normals;
    return g;
  }();
  BuildResult b = build_space(lm.mesh, xstar0, build_options(cfg));
  Geometry xstar = xstar0;
  for (int i = 0; i < cfg.levels; ++i) {
    RefineResult r = refine_geometry(b.space, b.geometry);
    b = std::move(r.built);
    xstar = std::move(r.xstar);
  }
  if (cfg.mode == "star") return star_level(b.space, xstar);
  return {b.space, b.geometry};
}

SolveOptions solve_options(const RunConfig& cfg) {
  SolveOptions so;
  so.quad = cfg.quad;
  so.solver = cfg.solver == "cg" ? SolverKind::CG : SolverKind::Direct;
  so.condition = cfg.cond;
  so.cond.seed = cfg.seed;
  return so;
}

Problem problem_of(const RunConfig& cfg) { return cfg.problem == "p2" ? Problem::P2 : Problem::P1; }

void check_p2_mode(const RunConfig& cfg) {
  if (cfg.problem == "p2" && cfg.mode == "star")
    throw Error(ErrorCode::InvalidArgument,
                "p2 needs EV splines; the mixed-smoothness space is only C0 across spoke edges");
}

fs::path out_file(const RunConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.out);
  return fs::path(cfg.out) / name;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

int cmd_info(const RunConfig& cfg) {
  const LoadedMesh lm = load_mesh(cfg.mesh, cfg.sidecar);
  const QuadMesh& mesh = *lm.mesh;
  const auto& cls = mesh.classification();
  std::cout << "mesh: " << lm.name << '\n'
            << "vertices: " << mesh.num_vertices() << '\n'
            << "edges: " << mesh.num_edges() << '\n'
            << "faces: " << mesh.num_faces() << '\n'
            << "boundary_vertices: " << cls.boundary_vertices().size() << '\n'
            << "boundary_edges: " << cls.boundary_edges().size() << '\n'
            << "corner_vertices: " << cls.corner_vertices().size() << '\n'
            << "extraordinary_faces: " << cls.extraordinary_faces().size() << '\n'
            << "spoke_edges: " << cls.spoke_edges().size() << '\n';
  std::cout << "extraordinary_vertices:";
  for (int v : cls.extraordinary_vertices())
    std::cout << ' ' << v << "(valence " << cls.valence[v] << (cls.boundary_vertex[v] ? ", boundary" : "") << ')';
  std::cout << '\n';
  const BuildResult b = coarse_space(cfg, lm);
  const int formula = dimension_formula(mesh);
  std::cout << "dofs_star: " << b.space.star.num_dofs() << '\n'
            << "eliminated_star_dofs: " << b.space.eliminated.size() << '\n'
            << "dofs: " << b.space.num_dofs() << '\n'
            << "dimension_formula: " << formula << '\n'
            << "formula_equality: " << (formula == b.space.num_dofs() ? "yes" : "no") << '\n';
  // Level i is the mesh refined i+1 times, as in the study output.
  BuildResult cur = b;
  for (int level = 0; level < cfg.levels; ++level) {
    cur = refine_geometry(cur.space, cur.geometry).built;
    std::cout << "level " << level << " dofs: " << cur.space.num_dofs() << '\n';
  }
  return kOk;
}

int cmd_refine(const RunConfig& cfg) {
  const LoadedMesh lm = load_mesh(cfg.mesh, cfg.sidecar);
  BuildResult b = coarse_space(cfg, lm);
  // File suffix r counts the refinements applied; r = 0 is the input mesh.
  for (int r = 0; r <= cfg.levels; ++r) {
    if (r > 0) b = refine_geometry(b.space, b.geometry).built;
    const std::string tag = std::to_string(r);
    std::ofstream obj(out_file(cfg, "refined_" + tag + ".obj"), std::ios::binary);
    const auto pts = vertex_surface_points(b.space, b.geometry);
    write_obj(obj, b.space.topo(), &pts);
    write_text(out_file(cfg, "space_" + tag + ".json"), space_json(b.space, b.geometry));
    std::cout << "refinements " << r << ": faces " << b.space.topo().num_faces() << ", dofs " << b.space.num_dofs()
              << '\n';
  }
  return kOk;
}

int cmd_fit(const RunConfig& cfg) {
  const LoadedMesh lm = load_mesh(cfg.mesh, cfg.sidecar);
  BuildResult b = coarse_space(cfg, lm);
  const auto target = bilinear_target(*lm.mesh);
  b.geometry.points = fit_geometry(b.space, target, cfg.quad);
  double dev = 0.0;
  const int m = 6;
  for (int f = 0; f < lm.mesh->num_faces(); ++f)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        const Vec2 xi((i + 0.5) / m, (j + 0.5) / m);
        dev = std::max(dev, (eval_geometry(b.space.table, b.geometry.points, f, xi).x - target(f, xi)).norm());
      }
  write_text(out_file(cfg, "fit.json"), space_json(b.space, b.geometry));
  std::ofstream obj(out_file(cfg, "fit.obj"), std::ios::binary);
  const auto pts = vertex_surface_points(b.space, b.geometry);
  write_obj(obj, *lm.mesh, &pts);
  std::cout << "dofs: " << b.space.num_dofs() << "\nmax_deviation: " << format_double(dev) << '\n';
  return kOk;
}

int cmd_solve(const RunConfig& cfg) {
  check_p2_mode(cfg);
  const LoadedMesh lm = load_mesh(cfg.mesh, cfg.sidecar);
  const Level lv = refined_level(cfg, lm);
  const ExactSolution exact = manufactured_solution();
  const Solution sol = solve_problem(lv.space, lv.geometry, problem_of(cfg), exact, solve_options(cfg));
  const ErrorNorms err = error_norms(lv.space, lv.geometry, sol.coeffs, exact, cfg.quad);
  ConvergenceRecord rec;
  rec.problem = problem_of(cfg);
  rec.levels.push_back({cfg.levels - 1, sol.n, err, sol.kappa, std::nullopt, std::nullopt, std::nullopt});
  std::ofstream csv(out_file(cfg, "solution.csv"), std::ios::binary);
  write_convergence_csv(csv, rec);
  std::ofstream vtk(out_file(cfg, "solution.vtk"), std::ios::binary);
  const std::vector<double> field(sol.coeffs.data(), sol.coeffs.data() + sol.coeffs.size());
  write_vtk(vtk, lv.space.table, lv.geometry.points, 8, &field, "u");
  std::cout << "n: " << sol.n << "\nfree: " << sol.free << "\nerr_L2: " << format_double(err.l2)
            << "\nerr_H1: " << format_double(err.h1) << "\nerr_H2: " << format_double(err.h2)
            << "\nresidual: " << format_double(sol.residual) << '\n';
  if (sol.kappa) std::cout << "kappa: " << format_double(*sol.kappa) << '\n';
  return kOk;
}

int cmd_study(const RunConfig& cfg) {
  check_p2_mode(cfg);
  if (cfg.mode == "star") throw Error(ErrorCode::InvalidArgument, "study runs on the almost-C1 space only");
  if (cfg.levels < 1) throw Error(ErrorCode::InvalidArgument, "study needs --levels >= 1");
  const LoadedMesh lm = load_mesh(cfg.mesh, cfg.sidecar);
  const BuildResult b = coarse_space(cfg, lm);
  StudyOptions so;
  so.levels = cfg.levels;
  so.solve = solve_options(cfg);
  so.mode = build_options(cfg).mode;
  so.boundary_strategy = build_options(cfg).boundary_strategy;
  const ConvergenceRecord rec = convergence_study(b.space, b.geometry, problem_of(cfg), so);
  std::ofstream csv(out_file(cfg, "study.csv"), std::ios::binary);
  write_convergence_csv(csv, rec);
  // Gnuplot-friendly copy: whitespace separated, header commented.
  std::ofstream dat(out_file(cfg, "study.dat"), std::ios::binary);
  dat << "# level n err_L2 err_H1 err_H2\n";
  for (const auto& l : rec.levels)
    dat << l.level << ' ' << l.n << ' ' << format_double(l.err.l2) << ' ' << format_double(l.err.h1) << ' '
        << format_double(l.err.h2) << '\n';
  write_convergence_csv(std::cout, rec);
  return kOk;
}

int cmd_export(const RunConfig& cfg) {
  const LoadedMesh lm = load_mesh(cfg.mesh, cfg.sidecar);
  const Level lv = refined_level(cfg, lm);
  std::ofstream vtk(out_file(cfg, "surface.vtk"), std::ios::binary);
  write_vtk(vtk, lv.space.table, lv.geometry.points, 8);
  std::ofstream obj(out_file(cfg, "bezier.obj"), std::ios::binary);
  write_bezier_obj(obj, lv.space.table, lv.geometry.points);
  int pieces = 0;
  for (int f = 0; f < lv.space.topo().num_faces(); ++f)
    pieces += static_cast<int>(bezier_pieces(lv.space.table, lv.geometry.points, f).size());
  const double gap = shared_edge_gap(lv.space.table, lv.geometry.points, lv.space.topo());
  std::cout << "faces: " << lv.space.topo().num_faces() << "\nbezier_pieces: " << pieces
            << "\nshared_edge_gap: " << format_double(gap) << '\n';
  return kOk;
}

int exit_code(ErrorCode code) {
  if (code == ErrorCode::ParseError) return kParse;
  if (code == ErrorCode::InvalidArgument) return kUsage;
  if (is_mesh_error(code)) return kInvalidMesh;
  return kNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Almost-C1 biquadratic splines on unstructured quad meshes"};
  app.set_config("--config", "", "TOML/INI file with option defaults (flags take precedence)");
  app.require_subcommand(1);
  RunConfig cfg;
  app.add_option("--mesh", cfg.mesh, "OBJ path or fixture (disk:MU, grid:NXxNY, mixed)");
  app.add_option("--sidecar", cfg.sidecar, "JSON sidecar with corners and normals (1-based OBJ ids)");
  app.add_option("--mode", cfg.mode, "geometric, template, or star (mixed-smoothness space, p1 only)")
      ->check(CLI::IsMember({"geometric", "template", "star"}));
  app.add_option("--triangle", cfg.triangle, "control triangle at boundary EVs")
      ->check(CLI::IsMember({"min-area", "boundary-adapted"}));
  app.add_option("--levels", cfg.levels, "refinement levels")->check(CLI::NonNegativeNumber);
  app.add_option("--problem", cfg.problem, "p1 (Poisson) or p2 (biharmonic)")->check(CLI::IsMember({"p1", "p2"}));
  app.add_option("--quad", cfg.quad, "Gauss points per direction and piece")->check(CLI::Range(2, 20));
  app.add_option("--solver", cfg.solver, "direct or cg")->check(CLI::IsMember({"direct", "cg"}));
  app.add_flag("--cond", cfg.cond, "estimate the condition number");
  app.add_option("--out", cfg.out, "output directory");
  app.add_option("--seed", cfg.seed, "seed of the eigenvalue iterations");

  const std::map<std::string, std::pair<std::string, int (*)(const RunConfig&)>> commands = {
      {"info", {"print the mesh classification and dof counts", cmd_info}},
      {"refine", {"write OBJ and space dumps after 0..N refinements", cmd_refine}},
      {"fit", {"least-squares fit of the space to the bilinear mesh surface", cmd_fit}},
      {"solve", {"solve a model problem after N refinements", cmd_solve}},
      {"study", {"convergence study over N levels", cmd_study}},
      {"export", {"VTK samples and Bezier OBJ after N refinements", cmd_export}},
  };
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, entry] : commands) {
    auto* sub = app.add_subcommand(name, entry.first);
    sub->fallthrough();
    subs[name] = sub;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }
  if (cfg.mesh.empty()) {
    std::cerr << "error: --mesh is required\n";
    return kUsage;
  }
  try {
    for (const auto& [name, sub] : subs)
      if (sub->parsed()) return commands.at(name).second(cfg);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kOther;
  }
  return kUsage;
}
