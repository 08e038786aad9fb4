// simprod: command-line front end. Exit codes: 0 pass, 1 property fails,
// 2 input error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "simprod/dividing_lines.hpp"
#include "simprod/error.hpp"
#include "simprod/io.hpp"
#include "simprod/logic.hpp"
#include "simprod/normal_form.hpp"
#include "simprod/product.hpp"
#include "simprod/random.hpp"
#include "simprod/selftest.hpp"
#include "simprod/structure.hpp"

using namespace simprod;

namespace {

struct Settings {
  std::string format = "text";
  std::string output;
  std::uint64_t seed = 0;
  std::size_t depth = 2;
  std::size_t cases = 50;
  std::size_t k = 2;
  bool k_given = false;
};

// Collects a report; artifacts go to --output when given and are omitted in
// the "lines" format.
class Report {
 public:
  explicit Report(const Settings& settings) : settings_(settings) {}

  void artifact(const std::string& text) { artifacts_ << text; }
  void line(const std::string& text) { lines_ << text << "\n"; }

  int finish(const std::string& op, bool pass) {
    std::string artifacts = artifacts_.str();
    std::string lines = lines_.str();
    if (!settings_.output.empty()) {
      std::ofstream out(settings_.output, std::ios::binary);
      if (!out) throw Error("cannot write '" + settings_.output + "'");
      out << artifacts;
    } else if (settings_.format == "text" && !artifacts.empty()) {
      // Keep stdout readable as a bundle.
      std::cout << artifacts;
      lines = comment_out(lines);
    }
    std::cout << lines << "RESULT " << op << " " << (pass ? "PASS" : "FAIL") << "\n";
    return pass ? 0 : 1;
  }

 private:
  static std::string comment_out(const std::string& text) {
    std::string out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) out += (line.starts_with("#") ? "" : "# ") + line + "\n";
    return out;
  }

  const Settings& settings_;
  std::ostringstream artifacts_;
  std::ostringstream lines_;
};

Workspace load_all(const std::vector<std::string>& files) {
  Workspace ws;
  for (const auto& f : files)
    if (!f.empty()) ws.load_file(f);
  return ws;
}

Language single_language(const Workspace& ws, const char* role) {
  auto sections = ws.sections_of(SectionKind::Language);
  auto structures = ws.sections_of(SectionKind::Structure);
  if (structures.size() == 1) return ws.language(structure_language_name(*structures.front()));
  if (sections.size() != 1) throw Error(std::string("exactly one language expected for ") + role);
  return read_language(*sections.front());
}

// From --l1/--l2 files when given, otherwise from a product language in the inputs.
SimLanguage sim_language_of(const Workspace& ws, const std::string& l1, const std::string& l2) {
  if (!l1.empty() || !l2.empty()) {
    if (l1.empty() || l2.empty()) throw Error("--l1 and --l2 must be given together");
    return build_sim_language(single_language(load_all({l1}), "--l1"), single_language(load_all({l2}), "--l2"));
  }
  return ws.sim_language();
}

// A structure over `sl.base()` found in the inputs.
FiniteStructure product_structure(const Workspace& ws, const SimLanguage& sl) {
  auto structures = ws.sections_of(SectionKind::Structure);
  if (structures.size() != 1) throw Error("exactly one structure expected");
  return read_structure(*structures.front(), sl.base());
}

std::vector<Formula> read_theory(const std::string& arg, const Language& lang) {
  if (arg.empty() || arg == "empty") return {};
  std::vector<Formula> out;
  for (const auto& e : load_all({arg}).formulas()) out.push_back(e.parse(lang));
  return out;
}

std::map<std::string, Element> parse_assignment(const std::string& text) {
  std::map<std::string, Element> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw Error("assignment items are written var=element, got '" + item + "'");
    std::string var = item.substr(0, eq);
    std::string value = item.substr(eq + 1);
    if (value.empty() || value.find_first_not_of("0123456789") != std::string::npos)
      throw Error("assignment value for '" + var + "' must be a decimal element");
    out[var] = static_cast<Element>(std::stoul(value));
  }
  return out;
}

IndexedSequence sequence(const std::vector<Tuple>& items) { return IndexedSequence{items}; }

std::vector<SequenceFormula> sequence_formulas(const Workspace& ws, const Language& lang) {
  std::vector<SequenceFormula> out;
  for (const auto& e : ws.formulas()) out.push_back(e.sequence_formula(lang));
  if (out.empty()) throw Error("no formulas given");
  return out;
}

void report_verdict(Report& r, const Verdict& v) {
  if (!v) r.line("counterexample " + v.witness);
}

}  // namespace

int main(int argc, char** argv) {
  Settings st;
  CLI::App app{"Simple products of finite structures: construction, decomposition and checks"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--format", st.format, "Report format")->check(CLI::IsMember({"text", "lines"}));
  app.add_option("-o,--output", st.output, "Write generated artifacts to this file");

  std::vector<std::string> inputs;
  std::string l1, l2, m1, m2, t1 = "empty", t2 = "empty", assign;
  std::size_t factor = 1, aux = 0, n_rows = 0, m_cols = 0, size = 3;
  bool dedupe = false, intersection = false;
  std::string kind;

  auto with_inputs = [&](CLI::App* sub) {
    auto append = [&](const std::vector<std::string>& files) { inputs.insert(inputs.end(), files.begin(), files.end()); };
    sub->add_option_function<std::vector<std::string>>("inputs", append, "Input files ('-' for standard input)");
    for (const char* name : {"--lang", "--structure", "--formula", "--array", "--tuples"})
      sub->add_option_function<std::vector<std::string>>(name, append, "Input file")
          ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    return sub;
  };
  auto with_factors = [&](CLI::App* sub) {
    sub->add_option("--l1", l1, "First factor language file");
    sub->add_option("--l2", l2, "Second factor language file");
    return sub;
  };

  auto* parse = with_inputs(app.add_subcommand("parse", "Parse formulas and print their canonical form"));
  auto* eval = with_inputs(app.add_subcommand("eval", "Evaluate formulas on a structure"));
  eval->add_option("--assign", assign, "Assignment x=e,y=e");
  auto* prod = app.add_subcommand("product", "Build the standard simple product");
  with_factors(prod);
  prod->add_option("--m1", m1, "First factor structure")->required();
  prod->add_option("--m2", m2, "Second factor structure")->required();
  auto* decomp = with_factors(with_inputs(app.add_subcommand("decompose", "Recover factors of a product")));
  auto* convert = with_factors(with_inputs(app.add_subcommand("convert", "Standard conversion of factor formulas")));
  convert->add_option("--factor", factor, "Factor of the input formulas")->check(CLI::Range(1, 2));
  convert->add_option("--aux", aux, "Index of the auxiliary constant of the opposite factor");
  auto* tgen = with_factors(with_inputs(app.add_subcommand("tsim-gen", "Generate T_sim")));
  auto* tcheck = with_factors(with_inputs(app.add_subcommand("tsim-check", "Check T_sim on a structure")));
  for (auto* sub : {tgen, tcheck}) {
    sub->add_option("--t1", t1, "First factor theory file or 'empty'");
    sub->add_option("--t2", t2, "Second factor theory file or 'empty'");
  }
  auto* simplify = with_factors(with_inputs(app.add_subcommand("simplify", "Semi-simple normal form")));
  simplify->add_flag("--dedupe", dedupe, "Drop repeated disjuncts");
  auto* equiv = with_inputs(app.add_subcommand("equiv", "Compare two formulas on a structure"));
  auto* vc = with_inputs(app.add_subcommand("vc", "VC dimension of a partitioned formula"));
  auto* indisc = with_inputs(app.add_subcommand("indisc", "Check indiscernibility of a sequence"));
  auto* mutual = with_inputs(app.add_subcommand("mutual-indisc", "Check mutual indiscernibility"));
  mutual->add_flag("--intersection", intersection, "Use the intersection reading for parameters");
  auto* distal = with_inputs(app.add_subcommand("distal-check", "Insert a tuple between indiscernible flanks"));
  auto* ict = with_inputs(app.add_subcommand("ict", "Check an ICT pattern"));
  auto* tbuild = app.add_subcommand("tp2-build", "Generate a structure with a TP2 array");
  tbuild->add_option("n", n_rows, "Rows")->required();
  tbuild->add_option("m", m_cols, "Columns")->required();
  auto* tp2 = with_inputs(app.add_subcommand("tp2-check", "Check a TP2 array"));
  for (auto* sub : {tbuild, tp2})
    sub->add_option("--k", st.k, "Inconsistency bound")->each([&](const std::string&) { st.k_given = true; });
  auto* self = app.add_subcommand("selftest", "Run the random property suite");
  self->add_option("--seed", st.seed, "Seed");
  self->add_option("--cases", st.cases, "Number of cases");
  auto* rnd = app.add_subcommand("random", "Generate a random structure or formula");
  rnd->add_option("kind", kind, "structure or formula")->required()->check(CLI::IsMember({"structure", "formula"}));
  rnd->add_option("--lang", inputs, "Language file (a random language is generated otherwise)");
  rnd->add_option("--seed", st.seed, "Seed");
  rnd->add_option("--size", size, "Maximum structure size");
  rnd->add_option("--depth", st.depth, "Maximum quantifier depth");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  Report r(st);
  try {
    if (*parse) {
      Workspace ws = load_all(inputs);
      Language lang = single_language(ws, "parsing");
      auto entries = ws.formulas();
      for (std::size_t i = 0; i < entries.size(); ++i) {
        Formula f = entries[i].parse(lang);
        r.artifact(render_formula(f) + "\n");
        std::string fv;
        for (const auto& v : free_variables(f)) fv += " " + v;
        r.line("formula " + std::to_string(i) + " free" + fv + " depth " + std::to_string(quantifier_depth(f)) +
               " size " + std::to_string(formula_size(f)));
      }
      return r.finish("parse", true);
    }

    if (*eval) {
      Workspace ws = load_all(inputs);
      FiniteStructure s = ws.structure();
      auto values = parse_assignment(assign);
      bool pass = true;
      for (const auto& e : ws.formulas()) {
        Formula f = e.parse(s.language());
        auto fv = free_variables(f);
        bool assigned = std::all_of(fv.begin(), fv.end(), [&](const std::string& v) { return values.count(v); });
        r.line("formula " + render_formula(f));
        if (assigned) {
          Assignment a;
          for (const auto& v : fv) a[v] = values.at(v);
          bool holds = evaluate(s, f, a);
          if (!fv.empty()) r.line("assignment " + format_assignment(a));
          r.line(std::string("value ") + (holds ? "true" : "false"));
          if (!holds && fv.empty()) {
            auto report = check_sentences(s, std::vector<Formula>{f});
            if (report.verdicts[0].counterexample)
              r.line("counterexample " + format_assignment(*report.verdicts[0].counterexample));
          }
          pass = pass && holds;
        } else {
          std::string set = "set (";
          for (std::size_t i = 0; i < fv.size(); ++i) set += (i ? "," : "") + fv[i];
          set += "):";
          for (const auto& t : definable_set(s, f, fv)) set += " " + format_tuple(t);
          r.line(set);
        }
      }
      return r.finish("eval", pass);
    }

    if (*prod) {
      Workspace w1 = load_all({l1, m1});
      Workspace w2 = load_all({l2, m2});
      FiniteStructure s1 = w1.structure();
      FiniteStructure s2 = w2.structure();
      SimLanguage sl = build_sim_language(s1.language(), s2.language());
      FiniteStructure n = product(s1, s2, sl);
      r.artifact(write_language(s1.language()) + "\n" + write_language(s2.language()) + "\n" +
                 write_sim_language(sl) + "\n" + write_structure(n));
      r.line("size " + std::to_string(n.size()));
      return r.finish("product", true);
    }

    if (*decomp) {
      Workspace ws = load_all(inputs);
      SimLanguage sl = sim_language_of(ws, l1, l2);
      FiniteStructure n = product_structure(ws, sl);
      try {
        Decomposition d = decompose(n, sl);
        r.artifact(write_language(d.factor1.language()) + "\n" + write_structure(d.factor1) + "\n" +
                   write_language(d.factor2.language()) + "\n" + write_structure(d.factor2));
        std::string sigma = "sigma";
        for (Element e : d.sigma) sigma += " " + std::to_string(e);
        r.line("sizes " + std::to_string(d.factor1.size()) + " " + std::to_string(d.factor2.size()));
        r.line(sigma);
        return r.finish("decompose", true);
      } catch (const AxiomViolation& v) {
        r.line("violated " + v.axiom());
        r.line(std::string("counterexample ") + v.what());
        return r.finish("decompose", false);
      }
    }

    if (*convert) {
      Workspace ws = load_all(inputs);
      SimLanguage sl = sim_language_of(ws, l1, l2);
      Factor k = factor == 1 ? Factor::First : Factor::Second;
      ConversionOptions options{aux};
      for (const auto& e : ws.formulas())
        r.artifact(render_formula(standard_conversion(e.parse(sl.factor(k)), k, sl, options)) + "\n");
      return r.finish("convert", true);
    }

    if (*tgen || *tcheck) {
      Workspace ws = load_all(inputs);
      SimLanguage sl = sim_language_of(ws, l1, l2);
      auto th1 = read_theory(t1, sl.factor(Factor::First));
      auto th2 = read_theory(t2, sl.factor(Factor::Second));
      auto tsim = build_t_sim(th1, th2, sl);
      if (*tgen) {
        std::string text = "formula T_sim\n";
        for (const auto& f : tsim) text += render_formula(f) + "\n";
        r.artifact(text);
        r.line("sentences " + std::to_string(tsim.size()));
        return r.finish("tsim-gen", true);
      }
      FiniteStructure n = product_structure(ws, sl);
      auto report = check_sentences(n, tsim);
      for (std::size_t i = 0; i < report.verdicts.size(); ++i) {
        const auto& v = report.verdicts[i];
        r.line("sentence " + std::to_string(i) + " " + (v.holds ? "PASS" : "FAIL"));
        if (!v.holds) {
          r.line("  " + render_formula(v.sentence));
          if (v.counterexample) r.line("  counterexample " + format_assignment(*v.counterexample));
        }
      }
      return r.finish("tsim-check", report.passed());
    }

    if (*simplify) {
      Workspace ws = load_all(inputs);
      SimLanguage sl = sim_language_of(ws, l1, l2);
      auto structures = ws.sections_of(SectionKind::Structure);
      bool pass = true;
      for (const auto& e : ws.formulas()) {
        Formula f = e.parse(sl.base());
        auto ssf = semi_simplify(f, sl, SimplifyOptions{dedupe});
        r.line("formula " + render_formula(f));
        r.line("disjuncts " + std::to_string(ssf.disjuncts.size()));
        for (std::size_t i = 0; i < ssf.disjuncts.size(); ++i) {
          r.line(std::to_string(i + 1) + " psi1 " + render_formula(ssf.disjuncts[i].psi1));
          r.line(std::to_string(i + 1) + " psi2 " + render_formula(ssf.disjuncts[i].psi2));
        }
        Formula g = realize(ssf, sl);
        r.line("realized " + render_formula(g));
        if (structures.size() == 1) {
          FiniteStructure n = read_structure(*structures.front(), sl.base());
          auto eq = check_equivalent(n, f, g, free_variables(f));
          r.line(std::string("equivalent ") + (eq ? "yes" : "no"));
          if (!eq) r.line("counterexample " + format_assignment(*eq.counterexample));
          pass = pass && eq.equivalent;
        }
      }
      return r.finish("simplify", pass);
    }

    if (*equiv) {
      Workspace ws = load_all(inputs);
      FiniteStructure s = ws.structure();
      auto entries = ws.formulas();
      if (entries.size() != 2) throw Error("equiv needs exactly two formulas");
      auto result = check_equivalent(s, entries[0].parse(s.language()), entries[1].parse(s.language()));
      if (!result) r.line("counterexample " + format_assignment(*result.counterexample));
      return r.finish("equiv", result.equivalent);
    }

    if (*vc) {
      Workspace ws = load_all(inputs);
      FiniteStructure s = ws.structure();
      auto entries = ws.formulas();
      if (entries.empty()) throw Error("no formula given");
      for (const auto& e : entries) {
        PartitionedFormula pf = e.partitioned(s.language());
        r.line("formula " + render_formula(pf.formula));
        r.line("traces " + std::to_string(trace_family(s, pf).size()));
        r.line("vc_dim " + std::to_string(vc_dim(s, pf)));
      }
      return r.finish("vc", true);
    }

    if (*indisc || *mutual || *distal) {
      Workspace ws = load_all(inputs);
      FiniteStructure s = ws.structure();
      auto formulas = sequence_formulas(ws, s.language());
      TupleSection tuples = ws.tuples();
      if (*indisc) {
        Verdict v = check_indiscernible(s, sequence(tuples.one("sequence")), tuples.params, formulas);
        report_verdict(r, v);
        return r.finish("indisc", v.holds);
      }
      if (*mutual) {
        std::vector<IndexedSequence> family;
        for (const auto& list : tuples.all("sequence")) family.push_back(sequence(list));
        Verdict v = check_mutually_indiscernible(s, family, tuples.params, formulas,
                                                 intersection ? MutualParameters::Intersection : MutualParameters::Union);
        report_verdict(r, v);
        return r.finish("mutual-indisc", v.holds);
      }
      const auto& c = tuples.one("insert");
      if (c.size() != 1) throw Error("'insert' lists exactly one tuple");
      auto result = distal_insertion_check(s, sequence(tuples.one("left")), c.front(), sequence(tuples.one("right")),
                                           tuples.params, formulas);
      r.line("approximation finite flanks stand in for sequences without endpoints");
      r.line(std::string("hypothesis ") + (result.flanks ? "PASS" : "FAIL"));
      if (!result.flanks) r.line("hypothesis-counterexample " + result.flanks.witness);
      report_verdict(r, result.inserted);
      return r.finish("distal-check", result.inserted.holds);
    }

    if (*ict) {
      Workspace ws = load_all(inputs);
      FiniteStructure s = ws.structure();
      auto entries = ws.formulas();
      if (entries.size() != 2) throw Error("ict needs exactly two formulas");
      TupleSection tuples = ws.tuples();
      IctInstance inst{entries[0].partitioned(s.language()), entries[1].partitioned(s.language()), tuples.one("a"),
                       tuples.one("b")};
      Verdict v = check_ict_pattern(s, inst);
      report_verdict(r, v);
      return r.finish("ict", v.holds);
    }

    if (*tbuild) {
      Tp2Witness w = build_tp2_witness(n_rows, m_cols);
      w.array.k = st.k;
      std::size_t paths = w.structure.size() - n_rows * m_cols;
      r.artifact(write_language(w.structure.language()) + "\n" + write_structure(w.structure) + "\n" +
                 write_partitioned(w.formula, "phi") + "\n" +
                 write_array(w.array, {"rows and columns are 0-based; element " + std::to_string(paths) +
                                           " + j - 1 stands for the block integer j",
                                       "cell t i holds the element standing for t*m + i + 1"}));
      r.line("universe " + std::to_string(w.structure.size()));
      return r.finish("tp2-build", true);
    }

    if (*tp2) {
      if (inputs.empty()) inputs.push_back("-");
      Workspace ws = load_all(inputs);
      FiniteStructure s = ws.structure();
      auto entries = ws.formulas();
      if (entries.size() != 1) throw Error("tp2-check needs exactly one formula");
      PartitionedFormula pf = entries[0].partitioned(s.language());
      Tp2Array arr = ws.array();
      if (st.k_given) arr.k = st.k;
      Verdict v = check_tp2_array(s, pf, arr);
      auto cells = cell_satisfiable(s, pf, arr);
      bool all = true;
      for (const auto& row : cells)
        for (bool c : row) all = all && c;
      r.line("k " + std::to_string(arr.k));
      r.line(std::string("cells-satisfiable ") + (all ? "yes" : "no"));
      report_verdict(r, v);
      return r.finish("tp2-check", v.holds);
    }

    if (*self) {
      SelftestResult result = run_selftest(st.seed, st.cases);
      std::cout << result.report;
      return result.passed() ? 0 : 1;
    }

    if (*rnd) {
      Rng rng(st.seed);
      Workspace ws = load_all(inputs);
      bool have_language = !ws.sections_of(SectionKind::Language).empty();
      Language lang = have_language ? single_language(ws, "generation") : random_language(rng, {"L", 1, 2, 1, 2, 2});
      if (!have_language) r.artifact(write_language(lang) + "\n");
      if (kind == "structure") {
        r.artifact(write_structure(random_structure(rng, lang, 1, size)));
      } else {
        RandomFormulaOptions fo;
        fo.depth = st.depth;
        r.artifact(write_formula(random_formula(rng, lang, fo)));
      }
      return r.finish("random", true);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
