#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "pqfreq/cli.hpp"
#include "pqfreq/experiments.hpp"

namespace py = pybind11;
using namespace pqfreq;

namespace {

py::dict report_dict(const SolveReport& r) {
  py::dict d;
  d["quantity"] = r.quantity;
  d["value"] = r.value;
  d["extrapolated"] = r.extrapolated ? py::cast(*r.extrapolated) : py::none();
  d["h"] = r.h;
  d["iterations"] = r.iterations;
  d["residual"] = r.residual;
  d["converged"] = r.converged;
  d["diagnostics"] = r.diagnostics;
  return d;
}

SolveOptions options(double tol, int max_iter, int refine, const std::string& backend) {
  SolveOptions o;
  o.tol = tol;
  o.max_iter = max_iter;
  o.refine = refine;
  if (backend == "cg") o.backend = LinearBackend::cg;
  else if (backend != "cholesky") throw ValidationError("backend must be cholesky or cg");
  return o;
}

GridDomain domain_of(const std::string& spec, double h) { return build_domain(DomainSpec::parse(spec, h)); }

}  // namespace

PYBIND11_MODULE(_pqfreq, m) {
  m.doc() = "Generalized principal frequencies on grid domains.";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);

  py::class_<GridDomain>(m, "Domain")
      .def(py::init([](const std::string& spec, double h) { return domain_of(spec, h); }), py::arg("spec"),
           py::arg("h"))
      .def_property_readonly("h", &GridDomain::h)
      .def_property_readonly("dim", &GridDomain::dim)
      .def_property_readonly("inside_count", &GridDomain::inside_count)
      .def_property_readonly("measure", &GridDomain::measure)
      .def_property_readonly("label", &GridDomain::label)
      .def("inradius", [](const GridDomain& d) { return inradius(d); })
      .def("topology_order", [](const GridDomain& d) { return topology_order(d); })
      .def("__repr__", [](const GridDomain& d) { return "<Domain " + d.label() + ">"; });

  m.def(
      "principal_frequency",
      [](const GridDomain& d, double p, double q, double tol, int max_iter, int refine, const std::string& backend) {
        SolveOptions o = options(tol, max_iter, refine, backend);
        SolveReport r;
        {
          py::gil_scoped_release release;
          r = principal_frequency(d, Exponents(d.dim(), p, q), o);
        }
        return report_dict(r);
      },
      py::arg("domain"), py::arg("p") = 2.0, py::arg("q") = 2.0, py::arg("tol") = 1e-8,
      py::arg("max_iter") = 10000, py::arg("refine") = 1, py::arg("backend") = "cholesky");

  m.def(
      "linf_frequency",
      [](const GridDomain& d, double p, int refine) {
        SolveOptions o;
        o.refine = refine;
        return report_dict(linf_frequency(d, p, o));
      },
      py::arg("domain"), py::arg("p"), py::arg("refine") = 1);

  m.def(
      "disk_capacity",
      [](const GridDomain& d, double cx, double cy, double r, double p) {
        return report_dict(capacity(d, ObstacleSet::disk(d.frame(), cx, cy, r), p));
      },
      py::arg("container"), py::arg("cx"), py::arg("cy"), py::arg("r"), py::arg("p") = 2.0,
      "Capacity of the grid disk of radius r about (cx, cy) relative to the container.");

  m.def("cheeger", [](const GridDomain& d) { return report_dict(cheeger_maxflow(d)); }, py::arg("domain"));
  m.def("cheeger_tv", [](const GridDomain& d) { return report_dict(lambda11_tv(d)); }, py::arg("domain"));
  m.def(
      "neumann_constant",
      [](const GridDomain& d, double p, double q) { return report_dict(neumann_constant(d, Exponents(d.dim(), p, q))); },
      py::arg("domain"), py::arg("p") = 2.0, py::arg("q") = 2.0);
  m.def(
      "punctured_radial",
      [](int N, double p, const std::string& mode, int nodes) {
        if (mode != "lp" && mode != "linf") throw ValidationError("mode must be lp or linf");
        return report_dict(punctured_radial(N, p, mode == "lp" ? RadialMode::Lp : RadialMode::Linf, nodes));
      },
      py::arg("N"), py::arg("p"), py::arg("mode") = "linf", py::arg("nodes") = 2000);

  m.def("scaling_exponent", [](int N, double p, double q) { return scaling_exponent(Exponents(N, p, q)); },
        py::arg("N"), py::arg("p"), py::arg("q"));
  m.def("theta", [](double p, double q) { return theta(Exponents(2, p, q)); }, py::arg("p"), py::arg("q"));
  m.def("theta_lower_bound",
        [](double p, double q, int k, double r) { return theta_lower_bound(Exponents(2, p, q), k, r); },
        py::arg("p"), py::arg("q"), py::arg("k"), py::arg("r"));
  m.def("punctured_ball_value", &punctured_ball_value, py::arg("N"), py::arg("p"));
  m.def("punctured_linf_lower", &punctured_linf_lower, py::arg("N"), py::arg("p"));
  m.def("disk_relative_capacity", &disk_relative_capacity, py::arg("eps"));

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code = cli::dispatch(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs one CLI invocation; returns (exit_code, stdout, stderr).");

  m.attr("inf") = kInf;
}
