#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "coarselab/cli.hpp"

namespace py = pybind11;
using namespace coarselab;

namespace {

// JSON crosses the boundary as text; the Python package decodes it.
std::string dump(const json& j) { return j.dump(); }
json load(const std::string& s) { return json::parse(s); }

py::tuple run(const std::string& name, const std::string& doc, std::optional<Nat> scale, std::optional<Nat> window,
              unsigned seed, std::size_t cap, const std::string& target, std::size_t max_size, bool as_json) {
  Options o;
  o.scale = scale;
  o.window = window;
  o.seed = seed;
  o.cap = cap;
  o.target = target;
  o.max_size = max_size;
  json parsed;
  try {
    parsed = load(doc);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Schema, std::string("document is not JSON: ") + e.what());
  }
  const CommandResult r = run_command(name, parsed, o);
  return py::make_tuple(r.exit_code, r.lines, dump(r.report), r.render(as_json));
}

}  // namespace

PYBIND11_MODULE(_coarselab, m) {
  m.attr("VERSION") = kVersion;
  m.attr("DOCUMENT_VERSION") = kDocumentVersion;

  py::register_exception<Error>(m, "CoarselabError", PyExc_ValueError);

  py::class_<LineSet>(m, "LineSet")
      .def_static("finite", &LineSet::finite, py::arg("elements"))
      .def_static(
          "periodic",
          [](std::vector<Nat> fin, const std::vector<std::pair<Nat, Nat>>& progs, std::vector<Nat> rem) {
            std::vector<Progression> ps;
            for (auto [start, step] : progs) ps.push_back({start, step});
            return LineSet::periodic(std::move(fin), std::move(ps), std::move(rem));
          },
          py::arg("finite") = std::vector<Nat>{}, py::arg("progressions") = std::vector<std::pair<Nat, Nat>>{},
          py::arg("removals") = std::vector<Nat>{})
      .def_static("naturals", &LineSet::naturals)
      .def_static("evens", &LineSet::evens)
      .def_static("odds", &LineSet::odds)
      .def_static("geometric", &LineSet::geometric, py::arg("m"), py::arg("b"), py::arg("k0"))
      .def_static("from_json_text", [](const std::string& s) { return LineSet::from_json(load(s)); })
      .def("to_json_text", [](const LineSet& s) { return dump(s.to_json()); })
      .def("__contains__", &LineSet::contains)
      .def("next", &LineSet::next)
      .def("window", &LineSet::window, py::arg("hi"))
      .def("is_finite", &LineSet::is_finite)
      .def("describe", &LineSet::describe)
      .def("__repr__", [](const LineSet& s) { return "LineSet(" + s.describe() + ")"; });

  m.def(
      "hausdorff_distance",
      [](const LineSet& a, const LineSet& b) -> std::optional<Nat> {
        const ExtDistance d = hausdorff_distance(a, b);
        if (d.infinite) return std::nullopt;
        return d.value;
      },
      py::arg("a"), py::arg("b"));

  m.def(
      "bunch_obstruction",
      [](const std::vector<LineSet>& family, Nat window, Nat max_scale) {
        const ObstructionResult r = bunch_obstruction(family, {window, max_scale});
        return py::make_tuple(r.built(), r.built() ? dump(r.obstruction->to_json()) : std::string(), r.rejection);
      },
      py::arg("family"), py::arg("window") = ObstructionBudget{}.window,
      py::arg("max_scale") = ObstructionBudget{}.max_scale);

  m.def(
      "validate_obstruction",
      [](const std::string& cert) { return dump(validate_obstruction(BunchObstruction::from_json(load(cert))).to_json()); },
      py::arg("certificate"));

  m.def(
      "lsr_documents",
      [](std::size_t width) {
        std::vector<std::string> out;
        for (const auto& c : enumerate_lsrs(width)) out.push_back(dump(lsr_document(c)));
        return out;
      },
      py::arg("width"));

  m.def("run", &run, py::arg("command"), py::arg("document"), py::arg("scale") = std::nullopt,
        py::arg("window") = std::nullopt, py::arg("seed") = 1u, py::arg("cap") = std::size_t{200},
        py::arg("target") = "non-ls-regular", py::arg("max_size") = std::size_t{3}, py::arg("as_json") = false);
}
