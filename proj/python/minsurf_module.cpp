#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "minsurf/balance.hpp"
#include "minsurf/config_io.hpp"
#include "minsurf/polynomial.hpp"
#include "minsurf/surface.hpp"
#include "minsurf/weierstrass.hpp"

namespace py = pybind11;
using namespace minsurf;

namespace {

Configuration make_config(std::vector<cplx> points, std::vector<double> necksizes, std::string label) {
  Configuration c{std::move(points), std::move(necksizes), std::move(label)};
  c.check_structure();
  return c;
}

std::vector<cplx> coeff_list(const Polynomial& p) { return {p.coeffs().begin(), p.coeffs().end()}; }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Balanced configurations and Weierstrass data for singly periodic minimal surfaces";

  auto base_error = py::register_exception<std::runtime_error>(m, "MinsurfError", PyExc_RuntimeError);
  // translators run newest first, so derived types are registered after their bases
  py::register_exception<ConfigurationError>(m, "ConfigurationError", PyExc_ValueError);
  py::register_exception<ConfigParseError>(m, "ConfigParseError", PyExc_ValueError);
  auto domain_error = py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<PoleError>(m, "PoleError", domain_error.ptr());
  py::register_exception<RangeError>(m, "RangeError", PyExc_ValueError);
  py::register_exception<RankError>(m, "RankError", base_error.ptr());
  py::register_exception<GeometryError>(m, "GeometryError", base_error.ptr());
  py::register_exception<QuadratureError>(m, "QuadratureError", base_error.ptr());
  static py::exception<IterationFailure> iteration_failure(m, "IterationFailure", base_error.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const IterationFailure& e) {
      py::object err = py::handle(iteration_failure.ptr())(e.what());
      err.attr("best_iterate") = py::cast(e.best_iterate());
      err.attr("residual") = e.residual();
      err.attr("residual_history") = py::cast(e.residual_history());
      PyErr_SetObject(iteration_failure.ptr(), err.ptr());
    }
  });

  py::class_<Configuration>(m, "Configuration")
      .def(py::init(&make_config), py::arg("points"), py::arg("necksizes"), py::arg("label") = "")
      .def_readwrite("points", &Configuration::points)
      .def_readwrite("necksizes", &Configuration::necksizes)
      .def_readwrite("label", &Configuration::label)
      .def("__len__", &Configuration::size)
      .def("check_structure", &Configuration::check_structure)
      .def("necksize_sum_defect", &Configuration::necksize_sum_defect)
      .def("necksizes_balanced", &Configuration::necksizes_balanced)
      .def("to_json", &config_to_json)
      .def_static("from_json", &parse_config, py::arg("text"))
      .def("__repr__", [](const Configuration& c) {
        return "<Configuration " + (c.label.empty() ? std::string("unlabelled") : c.label) + " with " +
               std::to_string(c.size()) + " points>";
      });

  // numeric core
  m.def("binom_sq_coeffs", [](int n) { return coeff_list(binom_sq_coeffs(n)); }, py::arg("n"));
  m.def(
      "poly_roots",
      [](std::vector<cplx> coeffs, double tol_root) {
        RootOptions o;
        o.tol_root = tol_root;
        const RootSet r = poly_roots(Polynomial(std::move(coeffs)), o);
        return py::make_tuple(r.roots, r.certified_simple, r.residuals);
      },
      py::arg("coeffs"), py::arg("tol_root") = RootOptions{}.tol_root,
      "Roots of sum coeffs[i] z^i; returns (roots, certified_simple, residuals).");
  m.def("cauchy_bound", [](std::vector<cplx> coeffs) { return cauchy_bound(Polynomial(std::move(coeffs))); });
  m.def("legendre_eval", &legendre_eval, py::arg("n"), py::arg("x"));
  m.def("fn_legendre_identity_defect", &fn_legendre_identity_defect, py::arg("n"), py::arg("z"));
  m.def("hypergeom_ode_residual", &hypergeom_ode_residual, py::arg("n"), py::arg("z"));

  // balance
  py::class_<BalanceReport>(m, "BalanceReport")
      .def_readonly("residuals", &BalanceReport::residuals)
      .def_readonly("max_abs", &BalanceReport::max_abs)
      .def_readonly("residue_theorem_defect", &BalanceReport::residue_theorem_defect)
      .def_readonly("defect_scale", &BalanceReport::defect_scale)
      .def_readonly("jacobian", &BalanceReport::jacobian);
  py::class_<SolveResult>(m, "SolveResult")
      .def_readonly("config", &SolveResult::config)
      .def_readonly("iterations", &SolveResult::iterations)
      .def_readonly("final_residual", &SolveResult::final_residual)
      .def_readonly("residual_history", &SolveResult::residual_history);
  m.def("balance_forces", &balance_forces, py::arg("config"));
  m.def("balance_residuals", &balance_residuals, py::arg("config"));
  m.def(
      "solve_balance",
      [](const Configuration& init, std::set<std::size_t> fixed, double tol, int max_iter) {
        SolverOptions o;
        o.tol = tol;
        o.max_iter = max_iter;
        return solve_balance(init, fixed, o);
      },
      py::arg("init"), py::arg("fixed"), py::arg("tol") = SolverOptions{}.tol,
      py::arg("max_iter") = SolverOptions{}.max_iter);
  m.def("legendre_config", &legendre_config, py::arg("n"));
  m.def("root_set_distance", &root_set_distance, py::arg("a"), py::arg("b"));

  // weierstrass
  m.def("gauss_map", &gauss_map, py::arg("config"), py::arg("z"));
  m.def("height_differential", [](const Configuration& c, cplx z) { return WeierstrassData(c).height(z); },
        py::arg("config"), py::arg("z"));
  m.def("gdh_residue", &gdh_residue, py::arg("config"), py::arg("k"));
  m.def(
      "contour_period",
      [](const Configuration& c, cplx center, double radius, double tol) {
        ContourOptions o;
        o.tol = tol;
        return contour_period(c, center, radius, o).coords;
      },
      py::arg("config"), py::arg("center"), py::arg("radius"), py::arg("tol") = ContourOptions{}.tol);
  m.def("contour_gdh_residue",
        [](const Configuration& c, cplx center, double radius) { return contour_gdh_residue(c, center, radius); },
        py::arg("config"), py::arg("center"), py::arg("radius"));
  m.def("default_radius", &default_radius, py::arg("config"), py::arg("k"));
  m.def(
      "verify_conditions",
      [](const Configuration& c) {
        const ConditionsReport r = verify_conditions(c);
        py::list checks;
        for (const ConditionCheck& ch : r.checks) {
          py::dict d;
          d["name"] = ch.name;
          d["passed"] = ch.passed;
          d["defect"] = ch.defect;
          d["detail"] = ch.detail;
          checks.append(d);
        }
        py::dict out;
        out["checks"] = checks;
        out["all_passed"] = r.all_passed();
        out["order_g_at_zero"] = r.order_g_at_zero;
        out["order_dh_at_zero"] = r.order_dh_at_zero;
        out["order_g_at_infinity"] = r.order_g_at_infinity;
        out["order_dh_at_infinity"] = r.order_dh_at_infinity;
        return out;
      },
      py::arg("config"));

  // surface
  m.def(
      "integrate_X",
      [](const Configuration& c, cplx z0, cplx z, std::vector<cplx> via, double tol) {
        PathOptions o;
        o.tol = tol;
        return integrate_X(c, z0, z, via, o);
      },
      py::arg("config"), py::arg("z0"), py::arg("z"), py::arg("via") = std::vector<cplx>{},
      py::arg("tol") = PathOptions{}.tol);

  py::class_<GridSpec>(m, "GridSpec")
      .def(py::init<>())
      .def_readwrite("r_min", &GridSpec::r_min)
      .def_readwrite("r_max", &GridSpec::r_max)
      .def_readwrite("n_r", &GridSpec::n_r)
      .def_readwrite("n_theta", &GridSpec::n_theta)
      .def_readwrite("puncture_cut", &GridSpec::puncture_cut)
      .def_readwrite("base_point", &GridSpec::base_point);
  m.def("default_grid", &default_grid, py::arg("config"));

  py::class_<SurfaceMesh>(m, "SurfaceMesh")
      .def_readonly("vertices", &SurfaceMesh::vertices)
      .def_readonly("parameters", &SurfaceMesh::parameters)
      .def_readonly("faces", &SurfaceMesh::faces)
      .def_readonly("base_point", &SurfaceMesh::base_point)
      .def_readonly("seam_offset", &SurfaceMesh::seam_offset)
      .def_readonly("seam_spread", &SurfaceMesh::seam_spread)
      .def_readonly("edge_closure_defect", &SurfaceMesh::edge_closure_defect)
      .def_readonly("balance_max_abs", &SurfaceMesh::balance_max_abs)
      .def_readonly("warnings", &SurfaceMesh::warnings)
      .def("seam_defect", &SurfaceMesh::seam_defect)
      .def("max_puncture_loop_defect", &SurfaceMesh::max_puncture_loop_defect)
      .def("to_obj", [](const SurfaceMesh& mesh) {
        std::ostringstream s;
        export_obj(mesh, s);
        return s.str();
      });
  m.def(
      "build_mesh",
      [](const Configuration& c, std::optional<GridSpec> g) { return build_mesh(c, g ? *g : default_grid(c)); },
      py::arg("config"), py::arg("grid") = py::none());
}
