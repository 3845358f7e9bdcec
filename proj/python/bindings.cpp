#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "epos/certificates.hpp"
#include "epos/csf.hpp"
#include "epos/error.hpp"
#include "epos/invariants.hpp"
#include "epos/pipeline.hpp"

namespace py = pybind11;
using namespace epos;

namespace {

std::vector<std::pair<std::vector<int>, std::int64_t>> expansion(const SymFunc& f) {
  std::vector<std::pair<std::vector<int>, std::int64_t>> out;
  const auto& parts = partitions_of(f.degree);
  for (std::size_t i = 0; i < parts.size(); ++i)
    if (f.coeffs[i] != 0) out.emplace_back(parts[i].parts(), f.coeffs[i]);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Native core of the e-positivity workbench";

  static py::exception<ValidationError> validation_error(m, "ValidationError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ValidationError& e) {
      py::set_error(validation_error, e.what());
    } catch (const InternalError& e) {
      py::set_error(PyExc_RuntimeError, e.what());
    }
  });

  m.def("connected_graphs", [](int n) {
    std::vector<std::string> out;
    enumerate_connected_graphs(n, [&](const Graph& g) { out.push_back(encode_graph6(g)); });
    return out;
  });
  m.def("canonical_graph6", [](const std::string& g6) { return encode_graph6(canonical_form(parse_graph6(g6))); });
  m.def("order", [](const std::string& g6) { return parse_graph6(g6).order(); });
  m.def("csf_e", [](const std::string& g6) { return expansion(csf_e(parse_graph6(g6))); },
        "Nonzero e-coefficients as (partition, coefficient) pairs");
  m.def("csf_m", [](const std::string& g6) { return expansion(csf_m(parse_graph6(g6))); });
  m.def("is_e_positive", [](const std::string& g6) { return is_e_positive(parse_graph6(g6)); });
  m.def("chromatic_count", [](const std::string& g6, int k) { return chromatic_count_via_e(parse_graph6(g6), k); });
  m.def("independence_number", [](const std::string& g6) { return independence_number(parse_graph6(g6)); });
  m.def("count_claws", [](const std::string& g6) { return count_claws(parse_graph6(g6)); });
  m.def("is_claw_contractible", [](const std::string& g6) { return is_claw_contractible(parse_graph6(g6)); });
  m.def("feature_names", [] { return feature_schema().names(); });
  m.def("features", [](const std::string& g6) { return compute_features(parse_graph6(g6)).values; });

  m.def("gen", [](int n_min, int n_max, const fs::path& out) { return cmd_gen(n_min, n_max, out); });
  m.def("label", [](const fs::path& in, const fs::path& out, int jobs) {
    const LabelSummary s = cmd_label(in, out, jobs);
    return py::dict(py::arg("total") = s.total, py::arg("positive") = s.positive, py::arg("computed") = s.computed,
                    py::arg("cached") = s.cached);
  });
  m.def("featurize", [](const fs::path& in, const fs::path& out, int jobs) { return cmd_featurize(in, out, jobs); });
  m.def("default_config_json", [] { return to_json(default_run_config()).dump(); });
  m.def("run_all_json", [](const std::string& config_json) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(config_json);
    } catch (const nlohmann::json::parse_error& e) {
      throw ValidationError(std::string("config is not valid JSON: ") + e.what());
    }
    RunConfig cfg = run_config_from_json(j);
    py::gil_scoped_release release;
    return cmd_run_all(cfg).dump();
  });
  m.def("verify_json", [](const fs::path& in, const std::string& condition, const std::string& family,
                          const fs::path& out, int jobs) {
    return cmd_verify(in, parse_condition(condition), parse_witness_family(family), out, jobs).dump();
  });
}
