#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "dao/adacp.hpp"
#include "dao/commands.hpp"
#include "dao/drag.hpp"
#include "dao/errors.hpp"
#include "dao/evalkit.hpp"
#include "dao/offline_backends.hpp"

namespace py = pybind11;

namespace {

// JSON reports cross the boundary as text and are decoded by the json module.
py::object to_python(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

}  // namespace

PYBIND11_MODULE(_dao, m) {
  m.doc() = "Multi-agent debate engine for event extraction";

  // Translators run newest first, so the base class is registered first.
  const auto& error = py::register_exception<dao::Error>(m, "DaoError");
  py::register_exception<dao::ConfigError>(m, "ConfigError", error.ptr());
  py::register_exception<dao::BackendError>(m, "BackendError", error.ptr());

  m.def("conformal_rank", &dao::conformal_rank, py::arg("n"), py::arg("delta"));
  m.def(
      "calibrate", [](const std::vector<double>& risks, double delta) { return dao::calibrate(risks, delta).value; },
      py::arg("risks"), py::arg("delta") = 0.1, "Split-conformal risk threshold (inf when the rank exceeds n).");
  m.def("accept", [](double risk, double threshold) { return dao::accept(risk, {threshold, 0}); }, py::arg("risk"),
        py::arg("threshold"));
  m.def("decay_radius", &dao::decay_radius, py::arg("radius"), py::arg("decay") = 0.9);

  m.def(
      "embed",
      [](const std::string& text, std::size_t dimension) { return dao::HashEmbedder(dimension).embed(text); },
      py::arg("text"), py::arg("dimension") = 256, "Hashed bag-of-words embedding.");
  m.def(
      "head_of_span",
      [](const std::string& sentence, const std::string& span) {
        return dao::head_of_span(dao::Sentence::make("s", sentence), span);
      },
      py::arg("sentence"), py::arg("span"));
  m.def(
      "trigger_prf",
      [](const std::vector<std::tuple<std::string, std::string, std::string>>& preds,
         const std::vector<std::tuple<std::string, std::string, std::string>>& golds) {
        auto items = [](const auto& v) {
          std::vector<dao::TriggerItem> out;
          for (const auto& [s, t, w] : v) out.push_back({s, t, w});
          return out;
        };
        const auto p = dao::trigger_f1(items(preds), items(golds));
        return py::dict(py::arg("precision") = p.precision, py::arg("recall") = p.recall, py::arg("f1") = p.f1,
                        py::arg("tp") = p.tp, py::arg("fp") = p.fp, py::arg("fn") = p.fn);
      },
      py::arg("preds"), py::arg("golds"), "Exact trigger P/R/F1 over (sentence_id, type, trigger) tuples.");

  m.def(
      "calibrate_config",
      [](const std::filesystem::path& config, const std::filesystem::path& corpus) {
        std::ostringstream log;
        py::gil_scoped_release release;
        dao::cmd_calibrate(config, corpus, log);
        return log.str();
      },
      py::arg("config"), py::arg("corpus"));
  m.def(
      "run",
      [](const std::filesystem::path& config, const std::filesystem::path& input, const std::filesystem::path& out,
         const std::string& mode) {
        if (mode != "ee" && mode != "eae") throw dao::ConfigError("mode must be ee or eae");
        std::ostringstream log;
        dao::RunSummary s;
        {
          py::gil_scoped_release release;
          s = dao::cmd_run(config, input, out, mode == "eae" ? dao::RunMode::EAE : dao::RunMode::EE, log);
        }
        return py::dict(py::arg("sentences") = s.sentences, py::arg("events") = s.events,
                        py::arg("warnings") = s.warnings);
      },
      py::arg("config"), py::arg("input"), py::arg("out"), py::arg("mode") = "ee");
  m.def(
      "evaluate",
      [](const std::filesystem::path& pred, const std::filesystem::path& gold, const std::string& task,
         const std::string& metric) {
        const auto t = dao::parse_eval_task(task);
        const auto mt = dao::parse_eval_metric(metric);
        if (!t || !mt) throw dao::ConfigError("unknown task or metric");
        return to_python(dao::cmd_eval(pred, gold, *t, *mt));
      },
      py::arg("pred"), py::arg("gold"), py::arg("task") = "ee", py::arg("metric") = "head");
}
