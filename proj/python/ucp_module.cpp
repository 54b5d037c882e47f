#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "ucp/cli.hpp"
#include "ucp/error.hpp"
#include "ucp/greens.hpp"
#include "ucp/landis.hpp"
#include "ucp/multiplier.hpp"
#include "ucp/operator.hpp"
#include "ucp/quasiball.hpp"
#include "ucp/report_json.hpp"
#include "ucp/scenarios.hpp"
#include "ucp/vanishing.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace {

py::object to_py(const json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

json from_py(const py::object& o) {
  return json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

/// Node values as an (n, n) array indexed [j, i] (row = y).
py::array_t<double> to_array(const ucp::ScalarField& f) {
  const int n = f.grid().n();
  py::array_t<double> a({n, n});
  auto m = a.mutable_unchecked<2>();
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) m(j, i) = f(i, j);
  return a;
}

ucp::Scenario scenario_from(const std::string& arg, std::optional<int> n,
                            std::optional<double> half_width) {
  ucp::Scenario s = ucp::parse_scenario_arg(arg);
  if (n) s.grid.n = *n;
  if (half_width) s.grid.half_width = *half_width;
  return s;
}

ucp::Point grid_center_node(const ucp::Grid2D& g) {
  return g.node((g.n() - 1) / 2, (g.n() - 1) / 2);
}

}  // namespace

PYBIND11_MODULE(_ucp, m) {
  m.doc() = "Quantitative unique continuation toolkit";

  py::register_exception<ucp::ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<ucp::CertificationError>(m, "CertificationError", PyExc_RuntimeError);

  m.def("fnv1a64", &ucp::fnv1a64, py::arg("data"));
  m.def("manifest_hash", [](const py::object& o) { return ucp::manifest_hash(from_py(o)); },
        py::arg("manifest"));

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::vector<const char*> argv{"ucp"};
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out, err;
        const int rc = ucp::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
        return py::make_tuple(rc, out.str(), err.str());
      },
      py::arg("args"), "Run the command-line front end; returns (exit code, stdout, stderr).");

  m.def("scenario_names", &ucp::builtin_names);
  m.def("scenario_parameters", &ucp::builtin_parameters, py::arg("name"));
  m.def(
      "scenario",
      [](const std::string& arg) { return to_py(ucp::to_json(ucp::parse_scenario_arg(arg))); },
      py::arg("scenario"), "Describe a preset (`name[:p1,p2]`) or scenario JSON file.");

  py::class_<ucp::ConstantGamma>(m, "ConstantGamma")
      .def(py::init([](double a11, double a12, double a22, double x, double y) {
             return ucp::ConstantGamma(ucp::Mat2{a11, a12, a12, a22}, ucp::Point{x, y});
           }),
           py::arg("a11"), py::arg("a12"), py::arg("a22"), py::arg("x") = 0.0, py::arg("y") = 0.0)
      .def("__call__", [](const ucp::ConstantGamma& g, double x, double y) { return g({x, y}); })
      .def("gradient",
           [](const ucp::ConstantGamma& g, double x, double y) {
             const ucp::Vec2 v = g.gradient({x, y});
             return py::make_tuple(v.x, v.y);
           })
      .def("outer_radius", &ucp::ConstantGamma::outer_radius)
      .def("inner_radius", &ucp::ConstantGamma::inner_radius)
      .def_property_readonly("perimeter", &ucp::ConstantGamma::perimeter)
      .def_property_readonly("d1", &ucp::ConstantGamma::d1)
      .def_property_readonly("d2", &ucp::ConstantGamma::d2);

  m.def(
      "verify_operator",
      [](const std::string& arg, std::optional<int> n, std::optional<double> hw) {
        const ucp::Scenario s = scenario_from(arg, n, hw);
        const ucp::Grid2D g = s.grid.make();
        return to_py(ucp::to_json(
            ucp::verify_structure(s.op, g, ucp::Disk{g.center(), g.half_width() - 4 * g.h()})));
      },
      py::arg("scenario"), py::arg("n") = py::none(), py::arg("half_width") = py::none());

  m.def(
      "fundamental_solution",
      [](const std::string& arg, std::optional<int> n, std::optional<double> hw) {
        const ucp::Scenario s = scenario_from(arg, n, hw);
        const ucp::Grid2D g = s.grid.make();
        const ucp::GreensField gf = ucp::variable_gamma(s.op, grid_center_node(g), g);
        return py::make_tuple(to_py(ucp::to_json(gf)), to_array(gf.gamma));
      },
      py::arg("scenario"), py::arg("n") = py::none(), py::arg("half_width") = py::none(),
      "Returns (report, Γ sampled on the grid).");

  m.def(
      "quasi_circle",
      [](const std::string& arg, double s_level, std::optional<int> n, std::optional<double> hw) {
        const ucp::Scenario s = scenario_from(arg, n, hw);
        const ucp::Grid2D g = s.grid.make();
        const ucp::GreensField gf = ucp::variable_gamma(s.op, grid_center_node(g), g);
        const ucp::QuasiGeometry q = ucp::quasi_circle(gf, s_level);
        py::array_t<double> c({static_cast<py::ssize_t>(q.contour.size()), py::ssize_t{2}});
        auto a = c.mutable_unchecked<2>();
        for (std::size_t k = 0; k < q.contour.size(); ++k) {
          a(k, 0) = q.contour[k].x;
          a(k, 1) = q.contour[k].y;
        }
        return py::make_tuple(to_py(ucp::to_json(q)), c);
      },
      py::arg("scenario"), py::arg("s"), py::arg("n") = py::none(),
      py::arg("half_width") = py::none(), "Returns (geometry report, contour as (k, 2) array).");

  m.def(
      "multiplier",
      [](const std::string& arg, double K, double mm, double b) {
        const ucp::Scenario s = ucp::parse_scenario_arg(arg);
        const ucp::Grid2D g = s.grid.make();
        std::function<double(ucp::Point)> boundary;
        if (s.phi) boundary = s.phi;
        const ucp::MultiplierBundle mb =
            ucp::multiplier_bundle(s.op, g, K, s.op.params().lambda, mm, b, boundary);
        return py::make_tuple(to_py(ucp::to_json(mb)), to_array(mb.positive.phi));
      },
      py::arg("scenario"), py::arg("K"), py::arg("m") = 1.4, py::arg("b") = 1.2,
      "Returns (bundle report, φ sampled on the grid).");

  m.def(
      "vanishing",
      [](const std::string& arg, double K, double F, double p, std::optional<double> C1,
         std::optional<double> c1, double r_min, double r_max, int r_count, int n) {
        const ucp::Scenario s = ucp::parse_scenario_arg(arg);
        if (!s.u || !s.phi)
          throw ucp::ValidationError("vanishing: scenario needs a solution and a multiplier");
        ucp::VanishingConfig cfg;
        cfg.K = K;
        cfg.F = F;
        cfg.p = p;
        cfg.C1 = C1;
        cfg.c1 = c1;
        cfg.n = n;
        cfg.lambda = s.op.params().lambda;
        cfg.r_grid = ucp::log_space(r_min, r_max, r_count);
        const ucp::VanishingReport rep = ucp::vanishing_pipeline(s.op, s.u, s.phi, cfg);
        json j = ucp::to_json(rep);
        j["verify"] = ucp::to_json(ucp::verify_oofv_bound(rep, rep.config));
        return to_py(j);
      },
      py::arg("scenario"), py::arg("K") = 1.0, py::arg("F") = 0.25, py::arg("p") = 1.0,
      py::arg("C1") = py::none(), py::arg("c1") = py::none(), py::arg("r_min") = 1e-3,
      py::arg("r_max") = 1e-1, py::arg("r_count") = 21, py::arg("n") = 256);

  m.def("fit_vanishing_order", [](const std::vector<double>& r, const std::vector<double>& norms) {
    return to_py(ucp::to_json(ucp::fit_vanishing_order(r, norms)));
  });

  m.def("iterate_exponents",
        [](double alpha0, double gamma, double eps) {
          return to_py(ucp::to_json(ucp::iterate_exponents(alpha0, gamma, eps)));
        },
        py::arg("alpha0"), py::arg("gamma"), py::arg("eps"));
  m.def("alpha_step", &ucp::alpha_step, py::arg("alpha"), py::arg("gamma"));
  m.def("beta_exponent", &ucp::beta_exponent, py::arg("alpha"), py::arg("gamma"));
  m.def("n0_bound", &ucp::n0_bound, py::arg("alpha0"), py::arg("gamma"));
  m.def(
      "evaluate_window",
      [](double S, double gamma, double Lambda, double lambda) {
        return to_py(ucp::to_json(ucp::evaluate_window(S, gamma, Lambda, lambda)));
      },
      py::arg("S"), py::arg("gamma"), py::arg("Lambda") = 1.0, py::arg("lambda") = 1.0);
  m.def(
      "minimal_admissible_S",
      [](double gamma, double Lambda, double lambda) {
        return static_cast<double>(ucp::minimal_admissible_S(gamma, Lambda, lambda));
      },
      py::arg("gamma"), py::arg("Lambda") = 1.0, py::arg("lambda") = 1.0);
  m.def(
      "radii_schedule",
      [](double S0, double gamma, double Lambda, int N) {
        std::vector<double> out;
        for (long double s : ucp::radii_schedule(S0, gamma, Lambda, N)) out.push_back(static_cast<double>(s));
        return out;
      },
      py::arg("S0"), py::arg("gamma"), py::arg("Lambda"), py::arg("N"));

  m.def(
      "landis_certificate",
      [](const std::string& mode, const std::map<std::string, py::object>& params) {
        ucp::LandisParams lp;
        if (mode == "global") lp.mode = ucp::LandisMode::Global;
        else if (mode != "general") throw ucp::ValidationError("mode must be general or global");
        for (const auto& [k, v] : params) {
          if (k == "class") {
            const auto c = v.cast<std::string>();
            if (c == "bounded") lp.cls = ucp::LandisClass::BoundedPotential;
            else if (c == "decaying") lp.cls = ucp::LandisClass::DecayingNegative;
            else throw ucp::ValidationError("class must be bounded or decaying");
            continue;
          }
          const double x = v.cast<double>();
          if (k == "eps") lp.eps = x;
          else if (k == "eps0") lp.eps0 = x;
          else if (k == "eps1") lp.eps1 = x;
          else if (k == "eps2") lp.eps2 = x;
          else if (k == "lambda") lp.lambda = x;
          else if (k == "mu0") lp.mu0 = x;
          else if (k == "mu1") lp.mu1 = x;
          else if (k == "mu2") lp.mu2 = x;
          else if (k == "C0") lp.C0 = x;
          else if (k == "alpha0") lp.alpha0 = x;
          else if (k == "S0") lp.S0 = x;
          else if (k == "R") lp.R = x;
          else throw ucp::ValidationError("unknown parameter '" + k + "'");
        }
        return to_py(ucp::to_json(ucp::landis_certificate(lp)));
      },
      py::arg("mode") = "general", py::arg("params") = std::map<std::string, py::object>{});
}
