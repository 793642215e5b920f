#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "twrc/channel.hpp"
#include "twrc/errors.hpp"
#include "twrc/io.hpp"
#include "twrc/optimizer.hpp"
#include "twrc/oracle.hpp"
#include "twrc/rate_region.hpp"
#include "twrc/regimes.hpp"

namespace py = pybind11;
using namespace twrc;

namespace {

py::tuple point(RatePoint r) { return py::make_tuple(r.r1, r.r2); }

py::dict assignment_dict(const SchemeAssignment& a) {
  py::dict d;
  d["user1"] = std::string(to_string(a.user1));
  d["user2"] = std::string(to_string(a.user2));
  return d;
}

py::dict regime_dict(const Regime& r) {
  py::dict d;
  d["r"] = std::string(to_string(r.r));
  d["t"] = std::string(to_string(r.t));
  d["side_condition"] = r.side_condition_holds;
  return d;
}

py::object solve_dict(const SolveResult& r) {
  // Same schema as the CLI's JSON output.
  return py::module_::import("json").attr("loads")(to_json(r).dump());
}

std::vector<py::tuple> vertices(const RegionHull& h) {
  std::vector<py::tuple> out;
  for (RatePoint v : h.vertices) out.push_back(point(v));
  return out;
}

RegionHull hull_from(const std::vector<std::pair<double, double>>& pts) {
  RegionHull h;
  for (auto [a, b] : pts) h.vertices.push_back({a, b});
  return h;
}

}  // namespace

PYBIND11_MODULE(_twrc, m) {
  m.doc() = "Two-way relay channel with composite decode-forward relaying";

  // Later registrations are tried first, so the subclass goes last.
  py::register_exception<Error>(m, "TwrcError", PyExc_RuntimeError);
  py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);

  py::class_<LinkGains>(m, "LinkGains")
      .def(py::init([](double g12, double g21, double g1r, double gr1, double g2r, double gr2,
                       double p) { return LinkGains{g12, g21, g1r, gr1, g2r, gr2, p}; }),
           py::arg("g12"), py::arg("g21"), py::arg("g1r"), py::arg("gr1"), py::arg("g2r"),
           py::arg("gr2"), py::arg("p") = 1.0)
      .def_readwrite("g12", &LinkGains::g12)
      .def_readwrite("g21", &LinkGains::g21)
      .def_readwrite("g1r", &LinkGains::g1r)
      .def_readwrite("gr1", &LinkGains::gr1)
      .def_readwrite("g2r", &LinkGains::g2r)
      .def_readwrite("gr2", &LinkGains::gr2)
      .def_readwrite("p", &LinkGains::p);

  py::class_<PowerAllocation>(m, "PowerAllocation")
      .def(py::init([](double alpha1, double beta1, double alpha2, double beta2, double pw1,
                       double pw2, double beta3) {
             return PowerAllocation{alpha1, beta1, alpha2, beta2, pw1, pw2, beta3};
           }),
           py::arg("alpha1") = 0.0, py::arg("beta1") = 0.0, py::arg("alpha2") = 0.0,
           py::arg("beta2") = 0.0, py::arg("pw1") = 0.0, py::arg("pw2") = 0.0,
           py::arg("beta3") = 0.0)
      .def_readwrite("alpha1", &PowerAllocation::alpha1)
      .def_readwrite("beta1", &PowerAllocation::beta1)
      .def_readwrite("alpha2", &PowerAllocation::alpha2)
      .def_readwrite("beta2", &PowerAllocation::beta2)
      .def_readwrite("pw1", &PowerAllocation::pw1)
      .def_readwrite("pw2", &PowerAllocation::pw2)
      .def_readwrite("beta3", &PowerAllocation::beta3);

  m.def("capacity", &capacity, py::arg("x"));
  m.def(
      "compute_constraints",
      [](const LinkGains& g, const PowerAllocation& a) {
        const RateConstraints c = compute_constraints(g, a);
        return py::make_tuple(c.j1, c.j2, c.j3, c.j4, c.j5);
      },
      py::arg("gains"), py::arg("allocation"));
  m.def(
      "best_weighted_point",
      [](const std::array<double, 5>& j, double mu) {
        return point(best_weighted_point({j[0], j[1], j[2], j[3], j[4]}, mu));
      },
      py::arg("constraints"), py::arg("mu"));
  m.def(
      "classify", [](const LinkGains& g) { return regime_dict(classify(g)); }, py::arg("gains"));
  m.def(
      "technique_lookup",
      [](const LinkGains& g, double mu) { return assignment_dict(technique_lookup(g, mu).assignment); },
      py::arg("gains"), py::arg("mu") = 0.75);
  m.def(
      "solve", [](const LinkGains& g, double mu) { return solve_dict(solve(g, mu)); },
      py::arg("gains"), py::arg("mu") = 0.75);
  m.def("lemma2_relay_power", &lemma2_relay_power, py::arg("gains"));
  m.def(
      "appendix_case_r2t5",
      [](const LinkGains& g, double mu) { return solve_dict(appendix_case_r2t5(g, mu)); },
      py::arg("gains"), py::arg("mu") = 0.75);
  m.def(
      "grid_region",
      [](const LinkGains& g, double step, const std::string& restriction) {
        GridOptions opts;
        opts.max_evaluations = grid_cap_from_env();
        return vertices(grid_region(g, step, restriction_from_string(restriction), opts));
      },
      py::arg("gains"), py::arg("step") = 0.05, py::arg("restriction") = "composite");
  m.def(
      "hull_contains",
      [](const std::vector<std::pair<double, double>>& outer,
         const std::vector<std::pair<double, double>>& inner,
         double slack) { return hull_contains(hull_from(outer), hull_from(inner), slack); },
      py::arg("outer"), py::arg("inner"), py::arg("slack") = 0.0);
  m.def(
      "gains_from_geometry",
      [](std::pair<double, double> user1, std::pair<double, double> user2,
         std::pair<double, double> relay, double gamma1, double gamma2, double p) {
        Geometry geom{{user1.first, user1.second}, {user2.first, user2.second},
                      {relay.first, relay.second}, gamma1, gamma2};
        return gains_from_geometry(geom, p);
      },
      py::arg("user1") = std::make_pair(0.0, 0.0), py::arg("user2") = std::make_pair(20.0, 0.0),
      py::arg("relay") = std::make_pair(10.0, 0.0), py::arg("gamma1") = 2.3,
      py::arg("gamma2") = 3.6, py::arg("p") = 1.0);
}
