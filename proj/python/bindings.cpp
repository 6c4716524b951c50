#include "helly/errors.hpp"
#include "helly/harness.hpp"
#include "helly/steinitz.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace helly;

namespace {

json parse(const std::string& s) { return json::parse(s); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Helly-type selection core";

  py::register_exception<HellyError>(m, "HellyError", PyExc_RuntimeError);

  m.def("h_integral", &h_integral, py::arg("d"));
  m.def("h_ball", [](const Vec& x) { return h_ball(x); }, py::arg("x"));

  m.def(
      "sparsify",
      [](const std::vector<Vec>& points) {
        auto r = sparsify(VPolytope(points));
        return py::make_tuple(r.indices, r.inradius);
      },
      py::arg("points"));
  m.def("steinitz_threshold", &steinitz_threshold, py::arg("d"));

  m.def(
      "generate_instance",
      [](const std::string& kind, int d, std::uint64_t seed, int n, int sets, bool inject) {
        GenParams p;
        p.kind = kind;
        p.d = d;
        p.seed = seed;
        p.n = n;
        p.sets = sets;
        p.inject_violation = inject;
        return generate_instance(p).dump();
      },
      py::arg("kind"), py::arg("d"), py::arg("seed"), py::arg("n") = 5, py::arg("sets") = 3, py::arg("inject") = false);

  m.def(
      "diam_select", [](const std::string& inst) { return to_json(colorful_diameter_select(diameter_instance(parse(inst)))).dump(); },
      py::arg("instance"));
  m.def(
      "func_select",
      [](const std::string& inst, double tol) {
        SelectOptions opt;
        opt.integration_tol = tol;
        return to_json(select_subset(func_instance(parse(inst)), opt)).dump();
      },
      py::arg("instance"), py::arg("tol") = 1e-9);
  m.def(
      "colorful_func", [](const std::string& inst) { return to_json(colorful_select(colorful_instance(parse(inst)))).dump(); },
      py::arg("instance"));
  m.def(
      "oracle", [](const std::string& kind, const std::string& inst) { return run_oracle(kind, parse(inst)).dump(); },
      py::arg("kind"), py::arg("instance"));

  m.def(
      "run_experiment",
      [](const std::string& config) {
        auto r = run_experiment(experiment_config_from_json(parse(config)));
        return py::make_tuple(to_csv(r), r.passed);
      },
      py::arg("config"));
}
