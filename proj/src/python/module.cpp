#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bop2te/service.hpp"

namespace py = pybind11;
using namespace bop2te;

namespace {

Json parse(const std::string& text, const char* field) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ValidationError(field, std::string("malformed JSON: ") + e.what());
  }
}

std::string design(const std::string& request) {
  const auto req = design_request_from_json(parse(request, "request"));
  const auto r = run_design(req);
  return Json{{"spec", to_json(req.spec)}, {"result", to_json(r)}}.dump();
}

std::string oc(const std::string& spec_json, const std::string& boundaries_json, const std::string& request) {
  const auto spec = design_spec_from_json(parse(spec_json, "spec"));
  const auto b = boundaries_from_json(parse(boundaries_json, "boundaries"), spec);
  return oc_report(spec, b, oc_request_from_json(parse(request, "request"))).dump();
}

std::string decide(const std::string& spec_json, const std::string& boundaries_json, int n, int responses,
                   int toxicities) {
  const auto spec = design_spec_from_json(parse(spec_json, "spec"));
  const auto b = boundaries_from_json(parse(boundaries_json, "boundaries"), spec);
  return to_json(interim_decision(spec, b, {n, responses, toxicities})).dump();
}

std::string multidose(const std::string& request) {
  return to_json(run_multidose(multidose_request_from_json(parse(request, "request")))).dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Joint efficacy/toxicity phase 2 design engine";
  py::register_exception<NotFoundError>(m, "NotFoundError", PyExc_LookupError);
  py::register_exception<ConflictError>(m, "ConflictError", PyExc_RuntimeError);

  m.def("design", &design, py::arg("request"), py::call_guard<py::gil_scoped_release>());
  m.def("oc", &oc, py::arg("spec"), py::arg("boundaries"), py::arg("request") = "{}",
        py::call_guard<py::gil_scoped_release>());
  m.def("decide", &decide, py::arg("spec"), py::arg("boundaries"), py::arg("n"), py::arg("responses"),
        py::arg("toxicities"));
  m.def("simulate_multidose", &multidose, py::arg("request"), py::call_guard<py::gil_scoped_release>());

  m.def(
      "posterior_tail",
      [](int x, int n, double tau_marginal, double total_tau, double threshold, bool above) {
        return beta_posterior_tail(x, n, tau_marginal, total_tau, threshold,
                                   above ? TailDirection::above : TailDirection::at_or_below);
      },
      py::arg("x"), py::arg("n"), py::arg("tau_marginal"), py::arg("total_tau"), py::arg("threshold"),
      py::arg("above") = true);
  m.def("pi_et_from_phi", &pi_et_from_phi, py::arg("pi_e"), py::arg("pi_t"), py::arg("phi"));
  m.def(
      "pava",
      [](const std::vector<double>& values, const std::vector<double>& weights, bool increasing) {
        return pava(values, weights, increasing ? Monotonicity::non_decreasing : Monotonicity::non_increasing);
      },
      py::arg("values"), py::arg("weights"), py::arg("increasing") = true);
}
