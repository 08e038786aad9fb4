#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "simprod/dividing_lines.hpp"
#include "simprod/error.hpp"
#include "simprod/io.hpp"
#include "simprod/normal_form.hpp"
#include "simprod/product.hpp"
#include "simprod/selftest.hpp"

namespace py = pybind11;
using namespace simprod;

namespace {

Factor factor_of(int k) {
  if (k != 1 && k != 2) throw Error("factor must be 1 or 2");
  return k == 1 ? Factor::First : Factor::Second;
}

Section only_section(const std::string& text, SectionKind kind, const char* what) {
  for (const auto& s : split_sections(text, "<string>"))
    if (s.kind == kind) return s;
  throw Error(std::string("no ") + what + " section in text");
}

py::object optional_assignment(const std::optional<Assignment>& a) {
  if (!a) return py::none();
  return py::cast(*a);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Simple products of finite relational structures";

  py::register_exception<Error>(m, "Error", PyExc_ValueError);

  py::class_<Language>(m, "Language")
      .def(py::init([](std::string name, std::vector<std::string> constants,
                       std::vector<std::pair<std::string, std::size_t>> preds) {
             std::vector<PredicateSymbol> ps;
             for (auto& [n, a] : preds) ps.push_back({n, a});
             return Language(std::move(name), std::move(constants), std::move(ps));
           }),
           py::arg("name"), py::arg("constants"), py::arg("predicates"))
      .def_static("from_text", [](const std::string& text) {
        return read_language(only_section(text, SectionKind::Language, "language"));
      })
      .def("to_text", &write_language)
      .def_property_readonly("name", &Language::name)
      .def_property_readonly("constants", &Language::constants)
      .def_property_readonly("predicates", [](const Language& l) {
        std::vector<std::pair<std::string, std::size_t>> out;
        for (const auto& p : l.predicates()) out.emplace_back(p.name, p.arity);
        return out;
      });

  py::class_<Formula>(m, "Formula")
      .def_static("parse", &parse_formula, py::arg("text"), py::arg("language"))
      .def("__str__", &render_formula)
      .def("__repr__", [](const Formula& f) { return "Formula(" + render_formula(f) + ")"; })
      .def("__eq__", [](const Formula& a, const Formula& b) { return a == b; })
      .def_property_readonly("free_variables", &free_variables)
      .def_property_readonly("quantifier_depth", &quantifier_depth);

  py::class_<FiniteStructure>(m, "Structure")
      .def_static("from_text", [](const std::string& text, const Language& lang) {
        return read_structure(only_section(text, SectionKind::Structure, "structure"), lang);
      })
      .def("to_text", &write_structure)
      .def_property_readonly("name", &FiniteStructure::name)
      .def_property_readonly("size", &FiniteStructure::size)
      .def_property_readonly("language", &FiniteStructure::language)
      .def("holds", [](const FiniteStructure& s, const std::string& p, const Tuple& t) { return s.holds(p, t); })
      .def("evaluate", [](const FiniteStructure& s, const Formula& f, const Assignment& a) { return evaluate(s, f, a); },
           py::arg("formula"), py::arg("assignment") = Assignment{})
      .def("definable_set", [](const FiniteStructure& s, const Formula& f, const std::vector<std::string>& vars) {
        return definable_set(s, f, vars);
      });

  py::class_<SimLanguage>(m, "SimLanguage")
      .def(py::init(&build_sim_language), py::arg("l1"), py::arg("l2"))
      .def_property_readonly("base", &SimLanguage::base)
      .def("factor", [](const SimLanguage& sl, int k) { return sl.factor(factor_of(k)); })
      .def("to_text", &write_sim_language);

  m.def("product", &product, py::arg("m1"), py::arg("m2"), py::arg("sim_language"));
  m.def("decompose", [](const FiniteStructure& n, const SimLanguage& sl) {
    Decomposition d = decompose(n, sl);
    return py::make_tuple(d.factor1, d.factor2, d.sigma);
  });
  m.def("isomorphic", &isomorphic);
  m.def("standard_conversion", [](const Formula& f, int k, const SimLanguage& sl, std::size_t aux) {
    return standard_conversion(f, factor_of(k), sl, ConversionOptions{aux});
  }, py::arg("formula"), py::arg("factor"), py::arg("sim_language"), py::arg("auxiliary_constant") = 0);
  m.def("build_t_sim", [](const std::vector<Formula>& t1, const std::vector<Formula>& t2, const SimLanguage& sl) {
    return build_t_sim(t1, t2, sl);
  });
  m.def("check_sentences", [](const FiniteStructure& s, const std::vector<Formula>& sentences) {
    py::list out;
    for (const auto& v : check_sentences(s, sentences).verdicts)
      out.append(py::make_tuple(v.holds, optional_assignment(v.counterexample)));
    return out;
  });
  m.def("semi_simplify", [](const Formula& f, const SimLanguage& sl) {
    std::vector<std::pair<Formula, Formula>> out;
    for (const auto& d : semi_simplify(f, sl).disjuncts) out.emplace_back(d.psi1, d.psi2);
    return out;
  });
  m.def("realize", [](const std::vector<std::pair<Formula, Formula>>& pairs, const SimLanguage& sl) {
    SemiSimpleFormula ssf;
    for (const auto& [a, b] : pairs) ssf.disjuncts.push_back({a, b});
    return realize(ssf, sl);
  });
  m.def("check_equivalent", [](const FiniteStructure& s, const Formula& f, const Formula& g) {
    auto r = check_equivalent(s, f, g);
    return py::make_tuple(r.equivalent, optional_assignment(r.counterexample));
  });
  m.def("vc_dim", [](const FiniteStructure& s, const Formula& f, std::vector<std::string> objects,
                     std::vector<std::string> params) {
    return vc_dim(s, PartitionedFormula{f, std::move(objects), std::move(params)});
  }, py::arg("structure"), py::arg("formula"), py::arg("objects"), py::arg("params"));
  m.def("build_tp2_witness", [](std::size_t n, std::size_t mcols) {
    Tp2Witness w = build_tp2_witness(n, mcols);
    py::dict out;
    out["structure"] = w.structure;
    out["formula"] = w.formula.formula;
    out["objects"] = w.formula.objects;
    out["params"] = w.formula.params;
    out["cells"] = w.array.cells;
    out["k"] = w.array.k;
    return out;
  });
  m.def("check_tp2_array", [](const FiniteStructure& s, const Formula& f, std::vector<std::string> objects,
                              std::vector<std::string> params, std::vector<std::vector<Tuple>> cells, std::size_t k) {
    Tp2Array arr;
    arr.rows = cells.size();
    arr.cols = cells.empty() ? 0 : cells.front().size();
    arr.k = k;
    arr.cells = std::move(cells);
    Verdict v = check_tp2_array(s, PartitionedFormula{f, std::move(objects), std::move(params)}, arr);
    return py::make_tuple(v.holds, v.witness);
  }, py::arg("structure"), py::arg("formula"), py::arg("objects"), py::arg("params"), py::arg("cells"),
     py::arg("k") = 2);
  m.def("run_selftest", [](std::uint64_t seed, std::size_t cases) {
    SelftestResult r = run_selftest(seed, cases);
    return py::make_tuple(r.passed(), r.report);
  });
}
