// Command-line front end: roots, verify, solve, mesh.
//
// Exit codes: 0 success, 1 verification failure / unbalanced mesh input,
// 2 bad input, 3 root-finder failure, 4 solver failure, 5 quadrature failure.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "minsurf/balance.hpp"
#include "minsurf/config_io.hpp"
#include "minsurf/polynomial.hpp"
#include "minsurf/surface.hpp"
#include "minsurf/weierstrass.hpp"

namespace {

using namespace minsurf;

enum Exit : int { kOk = 0, kFail = 1, kBadInput = 2, kRootFailure = 3, kSolverFailure = 4, kQuadFailure = 5 };

std::string num(double v, const char* f = "%.17g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

int cmd_roots(int n, const std::string& out_path) {
  if (n < 1 || n > kMaxBinomDegree) {
    std::cerr << "roots: --n must satisfy 1 <= n <= " << kMaxBinomDegree << " (got " << n << ")\n";
    return kBadInput;
  }
  Configuration c;
  try {
    c = legendre_config(n);
  } catch (const IterationFailure& e) {
    std::cerr << "roots: " << e.what() << "\n";
    return kRootFailure;
  }
  const double worst = balance_residuals(c).max_abs;
  if (out_path.empty() || out_path == "-") {
    std::cout << config_to_json(c);
    std::cerr << "max|F_k| = " << num(worst, "%.3e") << "\n";
  } else {
    write_config(out_path, c);
    std::cout << "max|F_k| = " << num(worst, "%.3e") << "\n";
  }
  return worst <= 1e-9 ? kOk : kFail;
}

double vec_defect(const Vec3& v, double x2_target) {
  return std::max({std::abs(v[0]), std::abs(v[1] - x2_target), std::abs(v[2])});
}

int cmd_verify(const std::string& path, double tol, const std::string& csv_path) {
  Configuration c;
  try {
    c = read_config(path);
  } catch (const std::exception& e) {
    std::cerr << "verify: " << e.what() << "\n";
    return kBadInput;
  }
  const std::size_t m = c.size();
  const BalanceReport rep = balance_residuals(c);
  const ConditionsReport cond = verify_conditions(c);

  std::vector<PeriodVector> periods;
  bool ok = true;
  double worst_period = 0.0;
  try {
    for (std::size_t k = 0; k < m; ++k) periods.push_back(contour_period(c, c.points[k], default_radius(c, k)));
  } catch (const std::exception& e) {
    std::cerr << "verify: " << e.what() << "\n";
    return kQuadFailure;
  }
  for (const auto& pv : periods) worst_period = std::max(worst_period, vec_defect(pv.coords, 0.0));

  std::printf("configuration %s (%zu catenoidal ends)\n", c.label.empty() ? "<unlabelled>" : c.label.c_str(), m);
  std::printf("%4s %24s %24s %12s %10s %11s %11s %11s\n", "k", "re_p", "im_p", "alpha", "|F_k|", "period_x1",
              "period_x2", "period_x3");
  for (std::size_t k = 0; k < m; ++k) {
    const auto& x = periods[k].coords;
    std::printf("%4zu %24.17g %24.17g %12.6g %10.3e %11.3e %11.3e %11.3e\n", k, c.points[k].real(),
                c.points[k].imag(), c.necksizes[k], std::abs(rep.residuals[k]), x[0], x[1], x[2]);
  }
  std::printf("max |F_k|              %.3e\n", rep.max_abs);
  std::printf("residue-theorem defect %.3e (scale %.3e)\n", std::abs(rep.residue_theorem_defect), rep.defect_scale);
  for (const auto& chk : cond.checks)
    std::printf("[%s] %-38s defect %.3e  %s\n", chk.passed ? "PASS" : "FAIL", chk.name.c_str(), chk.defect,
                chk.detail.c_str());

  try {
    const PeriodVector at0 = contour_period(c, 0.0, default_radius(c, m));
    double far = 0.0;
    for (const cplx p : c.points) far = std::max(far, std::abs(p));
    const PeriodVector atinf = contour_period(c, 0.0, 2.0 * far);
    const double d0 = std::min(vec_defect(at0.coords, std::numbers::pi), vec_defect(at0.coords, -std::numbers::pi));
    const double dinf =
        std::min(vec_defect(atinf.coords, std::numbers::pi), vec_defect(atinf.coords, -std::numbers::pi));
    std::printf("period around 0        (%.3e, %.12f, %.3e)  defect mod (0,pi,0) %.3e\n", at0.coords[0], at0.coords[1],
                at0.coords[2], d0);
    std::printf("period around infinity (%.3e, %.12f, %.3e)  defect mod (0,pi,0) %.3e\n", atinf.coords[0],
                atinf.coords[1], atinf.coords[2], dinf);
    worst_period = std::max({worst_period, d0, dinf});
  } catch (const std::exception& e) {
    std::cerr << "verify: " << e.what() << "\n";
    return kQuadFailure;
  }
  ok = worst_period <= tol;
  std::printf("worst period defect    %.3e (tol %.1e): %s\n", worst_period, tol, ok ? "PASS" : "FAIL");

  if (!csv_path.empty()) {
    std::ofstream csv(csv_path, std::ios::binary);
    csv << "k,re_p,im_p,alpha,abs_F,period_x1,period_x2,period_x3\n";
    Vec3 worst{};
    double alpha_sum = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      const auto& x = periods[k].coords;
      csv << k << ',' << num(c.points[k].real()) << ',' << num(c.points[k].imag()) << ',' << num(c.necksizes[k]) << ','
          << num(std::abs(rep.residuals[k])) << ',' << num(x[0]) << ',' << num(x[1]) << ',' << num(x[2]) << '\n';
      for (std::size_t i = 0; i < 3; ++i) worst[i] = std::max(worst[i], std::abs(x[i]));
      alpha_sum += c.necksizes[k];
    }
    csv << "summary,,," << num(alpha_sum) << ',' << num(rep.max_abs) << ',' << num(worst[0]) << ',' << num(worst[1])
        << ',' << num(worst[2]) << '\n';
    if (!csv) {
      std::cerr << "verify: cannot write " << csv_path << "\n";
      return kBadInput;
    }
  }
  return ok ? kOk : kFail;
}

int cmd_solve(const std::string& path, const std::vector<std::size_t>& fixed, const std::string& out_path,
              const SolverOptions& opts) {
  Configuration c;
  try {
    c = read_config(path);
  } catch (const std::exception& e) {
    std::cerr << "solve: " << e.what() << "\n";
    return kBadInput;
  }
  const std::set<std::size_t> fixed_set(fixed.begin(), fixed.end());
  try {
    const SolveResult r = solve_balance(c, fixed_set, opts);
    write_config(out_path, r.config);
    std::printf("iterations %d\nfinal max|F_k| %.3e\n", r.iterations, r.final_residual);
    return kOk;
  } catch (const ConfigurationError& e) {
    std::cerr << "solve: " << e.what() << "\n";
    return kBadInput;
  } catch (const IterationFailure& e) {
    Configuration partial = c;
    partial.points = e.best_iterate();
    write_config(out_path + ".partial", partial);
    std::cerr << "solve: " << e.what() << " (residual " << num(e.residual(), "%.3e") << "); best iterate written to "
              << out_path << ".partial\n";
    return kSolverFailure;
  } catch (const RankError& e) {
    Configuration partial = c;
    partial.points = e.iterate();
    write_config(out_path + ".partial", partial);
    std::cerr << "solve: " << e.what() << "; last iterate written to " << out_path << ".partial\n";
    return kSolverFailure;
  }
}

struct MeshFlags {
  std::optional<double> r_min, r_max, cut;
  std::optional<int> n_r, n_theta;
  bool force = false;
};

int cmd_mesh(const std::string& path, const MeshFlags& flags, const std::string& out_path) {
  Configuration c;
  try {
    c = read_config(path);
  } catch (const std::exception& e) {
    std::cerr << "mesh: " << e.what() << "\n";
    return kBadInput;
  }
  const double worst = balance_residuals(c).max_abs;
  if (worst > 1e-8 && !flags.force) {
    std::cerr << "mesh: configuration unbalanced (max|F_k| = " << num(worst, "%.3e")
              << "); pass --force to mesh it anyway\n";
    return kFail;
  }
  GridSpec g = default_grid(c);
  if (flags.r_min) g.r_min = *flags.r_min;
  if (flags.r_max) g.r_max = *flags.r_max;
  if (flags.n_r) g.n_r = *flags.n_r;
  if (flags.n_theta) g.n_theta = *flags.n_theta;
  if (flags.cut) g.puncture_cut = *flags.cut;

  SurfaceMesh mesh;
  try {
    mesh = build_mesh(c, g);
  } catch (const QuadratureError& e) {
    std::cerr << "mesh: " << e.what() << "\n";
    return kQuadFailure;
  } catch (const GeometryError& e) {
    std::cerr << "mesh: " << e.what() << "\n";
    return kQuadFailure;
  }
  for (const auto& w : mesh.warnings) std::cerr << "mesh: warning: " << w << "\n";

  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "mesh: cannot open " << out_path << "\n";
    return kBadInput;
  }
  const std::size_t bytes = export_obj(mesh, out);
  std::printf("wrote %s: %zu vertices, %zu faces, %zu bytes\n", out_path.c_str(), mesh.vertices.size(),
              mesh.faces.size(), bytes);
  std::printf("seam_offset (%.12g, %.12g, %.12g) over %d rows\n", mesh.seam_offset[0], mesh.seam_offset[1],
              mesh.seam_offset[2], mesh.seam_rows);
  std::printf("period defect |seam - (0,+-pi,0)| %.3e\n", mesh.seam_defect());
  std::printf("puncture loop defect %.3e, edge closure defect %.3e\n", mesh.max_puncture_loop_defect(),
              mesh.edge_closure_defect);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Balanced catenoidal-end configurations and their singly periodic minimal surfaces"};
  app.require_subcommand(1);

  int n = 0;
  std::string roots_out;
  auto* roots = app.add_subcommand("roots", "Write the configuration built from the roots of f_n");
  roots->add_option("--n", n, "Degree, 1..25")->required();
  roots->add_option("--out", roots_out, "Output JSON (stdout when omitted)");

  std::string verify_in, csv_out;
  double verify_tol = 1e-8;
  auto* verify = app.add_subcommand("verify", "Report balance residuals, structural checks and periods");
  verify->add_option("config", verify_in, "Configuration JSON ('-' for stdin)")->required();
  verify->add_option("--tol", verify_tol, "Period defect tolerance");
  verify->add_option("--csv", csv_out, "Also write a CSV report");

  std::string solve_in, solve_out;
  std::vector<std::size_t> fixed;
  SolverOptions sopts;
  auto* solve = app.add_subcommand("solve", "Solve the balance equations by damped Newton");
  solve->add_option("config", solve_in, "Initial configuration JSON")->required();
  solve->add_option("--fixed", fixed, "0-based indices of points held fixed")->required();
  solve->add_option("--out", solve_out, "Output JSON")->required();
  solve->add_option("--tol", sopts.tol, "Target max|F_k|");
  solve->add_option("--max-iter", sopts.max_iter, "Iteration cap");

  std::string mesh_in, mesh_out;
  MeshFlags mf;
  auto* mesh = app.add_subcommand("mesh", "Integrate the surface over a log-polar grid and write OBJ");
  mesh->add_option("config", mesh_in, "Configuration JSON")->required();
  mesh->add_option("--out", mesh_out, "Output OBJ")->required();
  mesh->add_option("--rmin", mf.r_min, "Inner radius");
  mesh->add_option("--rmax", mf.r_max, "Outer radius");
  mesh->add_option("--nr", mf.n_r, "Radial grid points");
  mesh->add_option("--ntheta", mf.n_theta, "Angular grid cells");
  mesh->add_option("--cut", mf.cut, "Radius of the disk removed around each end");
  mesh->add_flag("--force", mf.force, "Mesh unbalanced configurations");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kBadInput;
  }

  try {
    if (*roots) return cmd_roots(n, roots_out);
    if (*verify) return cmd_verify(verify_in, verify_tol, csv_out);
    if (*solve) return cmd_solve(solve_in, fixed, solve_out, sopts);
    if (*mesh) return cmd_mesh(mesh_in, mf, mesh_out);
  } catch (const std::exception& e) {
    std::cerr << "minsurf: " << e.what() << "\n";
    return kBadInput;
  }
  return kBadInput;
}
