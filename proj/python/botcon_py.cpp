/* Copyright 2026 The botcon Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
// Python bindings. Structured results cross the boundary as JSON text and
// are decoded by the package's __init__.py.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "botcon/adversarial.hpp"
#include "botcon/augmentation.hpp"
#include "botcon/commands.hpp"
#include "botcon/config.hpp"
#include "botcon/evaluation.hpp"
#include "botcon/loss.hpp"

namespace py = pybind11;

namespace botcon {
namespace {

std::string RunCommandJson(const std::string& command, const std::string& toml_text,
                           const std::vector<std::string>& overrides, bool normalized, const std::string& axis) {
  const RunConfig cfg = ParseRunConfig(toml_text, overrides);
  CommandOptions opts;
  opts.normalized = normalized;
  opts.axis = axis;
  const CommandResult r = RunCommand(command, cfg, opts);
  nlohmann::ordered_json out;
  out["exit_code"] = r.exit_code;
  out["report_path"] = r.report_path.string();
  out["report"] = r.report;
  return out.dump();
}

std::string ConfigJson(const std::string& toml_text, const std::vector<std::string>& overrides) {
  return ToJson(ParseRunConfig(toml_text, overrides)).dump();
}

double Loss(const std::string& kind, const Matrix& z, const std::vector<int>& labels, double temperature) {
  if (z.rows() % 2 != 0) throw DimensionError("z needs an even number of rows");
  const auto partner = HalfPairing(static_cast<size_t>(z.rows() / 2));
  return ContrastiveLoss(ParseLossKind(kind), z, partner, labels, temperature, false).value;
}

std::string GradCheckJson(const std::string& kind, uint64_t seed, size_t pairs, size_t width, size_t d,
                          size_t out_dim, double eps) {
  const GradCheckInstance inst = MakeGradCheckInstance(seed, pairs, width, d, out_dim);
  const GradCheckResult r =
      GradCheck(ParseLossKind(kind), inst.params, inst.views, inst.partner, inst.labels, 1.0, eps);
  nlohmann::ordered_json j;
  j["max_relative_error"] = r.max_relative_error;
  j["worst_tensor"] = r.worst_tensor;
  j["worst_index"] = r.worst_index;
  j["checked"] = r.checked;
  return j.dump();
}

std::string MetricsJson(const std::vector<int>& predictions, const std::vector<int>& labels) {
  return ToJson(ComputeMetrics(predictions, labels)).dump();
}

}  // namespace
}  // namespace botcon

PYBIND11_MODULE(_core, m) {
  using namespace botcon;
  m.doc() = "botcon native core";

  // Translators run newest first, so the base class goes in before its subclasses.
  static py::exception<Error> base(m, "Error", PyExc_RuntimeError);
  static py::exception<ConfigError> config(m, "ConfigError", base.ptr());
  static py::exception<DimensionError> dimension(m, "DimensionError", base.ptr());
  static py::exception<ParseError> parse(m, "ParseError", base.ptr());
  static py::exception<DataError> data(m, "DataError", base.ptr());
  static py::exception<DefinitionError> definition(m, "DefinitionError", base.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ConfigError& e) {
      py::object err = py::reinterpret_borrow<py::object>(config.ptr())(e.what());
      err.attr("field") = e.field();
      PyErr_SetObject(config.ptr(), err.ptr());
    } catch (const DimensionError& e) {
      py::set_error(dimension, e.what());
    } catch (const ParseError& e) {
      py::set_error(parse, e.what());
    } catch (const DataError& e) {
      py::set_error(data, e.what());
    } catch (const DefinitionError& e) {
      py::set_error(definition, e.what());
    } catch (const Error& e) {
      py::set_error(base, e.what());
    }
  });

  m.def("build_id", [] { return std::string(BuildId()); });
  m.def("command_names", [] {
    std::vector<std::string> out;
    for (auto n : CommandNames()) out.emplace_back(n);
    return out;
  });
  m.def("run_command", &RunCommandJson, py::arg("command"), py::arg("config") = "",
        py::arg("overrides") = std::vector<std::string>{}, py::arg("normalized") = false,
        py::arg("axis") = "corruption_rate", py::call_guard<py::gil_scoped_release>());
  m.def("config_json", &ConfigJson, py::arg("config") = "", py::arg("overrides") = std::vector<std::string>{});
  m.def("contrastive_loss", &Loss, py::arg("kind"), py::arg("z"), py::arg("labels") = std::vector<int>{},
        py::arg("temperature") = 1.0);
  m.def("grad_check", &GradCheckJson, py::arg("kind"), py::arg("seed") = 1, py::arg("pairs") = 8,
        py::arg("width") = 20, py::arg("d") = 4, py::arg("out_dim") = 8, py::arg("eps") = 1e-5);
  m.def("metrics", &MetricsJson, py::arg("predictions"), py::arg("labels"));
  m.def("replacement_count", &ReplacementCount, py::arg("rate"), py::arg("width"));
}
