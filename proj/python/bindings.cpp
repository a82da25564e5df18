#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "eyam/cli.hpp"
#include "eyam/calculus.hpp"
#include "eyam/conformal.hpp"
#include "eyam/energy.hpp"
#include "eyam/normalize.hpp"
#include "eyam/prescribe.hpp"
#include "eyam/serialize.hpp"
#include "eyam/spectral.hpp"
#include "eyam/yamabe.hpp"

namespace py = pybind11;
using namespace eyam;

namespace {

// Python-side handle; the library shares grids as shared_ptr<const>.
struct PyGrid {
  GridPtr g;
};

GridFunction as_function(const GridPtr& g, const std::vector<double>& v) {
  if (v.size() != g->size()) throw std::invalid_argument("array length differs from grid");
  return GridFunction(g, v);
}

py::dict solve_dict(const SolveReport& r) {
  py::dict d = py::module_::import("json").attr("loads")(dump_json(to_json(r)));
  d["solution"] = r.solution.values;
  if (r.readback) d["R_readback"] = r.readback->R;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Radial exterior Yamabe solver";

  py::class_<PyGrid>(m, "Grid")
      .def_property_readonly("n", [](const PyGrid& p) { return p.g->dim(); })
      .def_property_readonly("nodes", [](const PyGrid& p) { return p.g->nodes; })
      .def_property_readonly("r_max", [](const PyGrid& p) { return p.g->r_max(); })
      .def_property_readonly("log_step", [](const PyGrid& p) { return p.g->log_step(); })
      .def("__len__", [](const PyGrid& p) { return p.g->size(); });

  m.def("build_grid", [](int n, double r_max, int N, const std::string& spacing) {
    return PyGrid{build_grid(n, r_max, N, parse_spacing(spacing))};
  }, py::arg("n"), py::arg("r_max"), py::arg("N"), py::arg("spacing") = "log");

  py::class_<Metric>(m, "Metric")
      .def_property_readonly("grid", [](const Metric& x) { return PyGrid{x.grid}; })
      .def_readonly("phi", &Metric::phi)
      .def_readonly("R", &Metric::R)
      .def_readonly("H", &Metric::H);

  m.def("flat_metric", [](const PyGrid& p) { return flat_metric(p.g); });
  m.def("well_metric", [](const PyGrid& p, double lo, double hi, double depth) {
    return well_metric(p.g, lo, hi, depth);
  }, py::arg("grid"), py::arg("r_lo"), py::arg("r_hi"), py::arg("depth"));
  m.def("metric_with_curvature", [](const PyGrid& p, const std::vector<double>& R, double H) {
    return metric_with_curvature(p.g, R, H);
  });
  m.def("bump_profile", [](const PyGrid& p, double a, double b) { return bump_profile(*p.g, a, b); });

  py::class_<RegionPair>(m, "Region")
      .def_readonly("mask", &RegionPair::omega_mask)
      .def_readonly("sigma_included", &RegionPair::sigma_included);
  m.def("full_region", [](const PyGrid& p) { return full_region(*p.g); });
  m.def("region", [](const PyGrid& p, const std::vector<std::pair<double, double>>& iv, bool inc) {
    return region_from_intervals(*p.g, iv, inc);
  }, py::arg("grid"), py::arg("intervals"), py::arg("include_boundary") = false);

  m.def("unit_root", &unit_root, py::arg("a"), py::arg("b"), py::arg("q"), py::arg("r"));
  m.def("weighted_norm", [](const PyGrid& g, const std::vector<double>& u, int k, double p, double delta) {
    return weighted_norm(as_function(g.g, u), {k, p, delta});
  }, py::arg("grid"), py::arg("u"), py::arg("k"), py::arg("p"), py::arg("delta"));

  m.def("energy", [](const Metric& metric, const RegionPair& region, const std::vector<double>& u) {
    const auto e = energy(metric, region, as_function(metric.grid, u));
    py::dict d;
    d["dirichlet"] = e.dirichlet;
    d["interior_R"] = e.interior_R;
    d["boundary_H"] = e.boundary_H;
    d["total"] = e.total;
    return d;
  });

  m.def("lambda_delta", [](const Metric& metric, const RegionPair& region, double delta) {
    const auto r = lambda_delta(metric, region, delta);
    py::dict d;
    d["value"] = r.value;
    d["sign"] = to_string(r.sign);
    d["scale"] = r.scale;
    if (r.minimizer) d["minimizer"] = r.minimizer->values;
    return d;
  }, py::arg("metric"), py::arg("region"), py::arg("delta") = 0.0);

  m.def("classify_sign", [](const Metric& metric, const RegionPair& region, const std::vector<double>& deltas) {
    return to_string(classify_sign(metric, region, deltas));
  }, py::arg("metric"), py::arg("region"), py::arg("delta_list") = std::vector<double>{0.0});

  m.def("yamabe_infimum", [](const Metric& metric, const RegionPair& region, double q, double r, double b,
                             std::uint64_t seed) {
    YamabeOptions o;
    o.seed = seed;
    const auto rep = yamabe_infimum(metric, region, {q, r, b}, o);
    return py::make_tuple(rep.value, to_string(rep.sign));
  }, py::arg("metric"), py::arg("region"), py::arg("q"), py::arg("r"), py::arg("b"), py::arg("seed") = 0);

  m.def("conformal_curvatures", [](const Metric& metric, const std::vector<double>& psi) {
    const auto t = conformal_curvatures(metric, as_function(metric.grid, psi));
    return py::make_tuple(t.Rp, t.Hp);
  });

  m.def("mms_case", [](const PyGrid& g, double a) {
    const auto c = mms_case(g.g, a);
    return py::make_tuple(c.u_exact.values, c.target.Hp);
  });

  m.def("solve_linear_robin", [](const Metric& metric, const std::vector<double>& c, double d,
                                 const std::vector<double>& f, double h) {
    return solve_linear_robin(metric, as_function(metric.grid, c), d, as_function(metric.grid, f), h).values;
  });

  m.def("prescribe", [](const Metric& metric, const std::vector<double>& Rp, double Hp) {
    if (Rp.size() != metric.grid->size()) throw std::invalid_argument("Rp length differs from grid");
    return solve_dict(prescribe_pipeline(metric, make_target(Rp, Hp), SolverOptions{}));
  }, py::arg("metric"), py::arg("Rp"), py::arg("Hp"));

  m.def("run_command", [](const std::string& command, const std::string& config, const std::string& out,
                          int jobs) {
    py::gil_scoped_release release;
    return cli::run_command(command, config, out, jobs);
  }, py::arg("command"), py::arg("config"), py::arg("out"), py::arg("jobs") = 1);
}
