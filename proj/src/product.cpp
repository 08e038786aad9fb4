#include "simprod/product.hpp"

#include <set>

#include "simprod/error.hpp"

namespace simprod {

const char* tag_name(PredicateTag tag) {
  switch (tag) {
    case PredicateTag::Factor1: return "Factor1";
    case PredicateTag::Factor2: return "Factor2";
    case PredicateTag::Sim1: return "Sim1";
    case PredicateTag::Sim2: return "Sim2";
  }
  return "";
}

// ---------------------------------------------------------------------------
// SimLanguage

const std::string& SimLanguage::product_constant(const std::string& c1, const std::string& c2) const {
  auto it = const_map_.find({c1, c2});
  if (it == const_map_.end()) throw UnknownSymbolError("no product constant for (" + c1 + ", " + c2 + ")");
  return it->second;
}

const std::pair<std::string, std::string>& SimLanguage::constant_pair(const std::string& product_constant) const {
  auto it = const_pairs_.find(product_constant);
  if (it == const_pairs_.end()) throw UnknownSymbolError("unknown product constant '" + product_constant + "'");
  return it->second;
}

const std::string& SimLanguage::base_predicate(Factor k, const std::string& factor_predicate) const {
  const auto& m = k == Factor::First ? pred_map1_ : pred_map2_;
  auto it = m.find(factor_predicate);
  if (it == m.end())
    throw UnknownSymbolError("unknown predicate '" + factor_predicate + "' in factor language " + factor(k).name());
  return it->second;
}

std::optional<std::pair<Factor, std::string>> SimLanguage::factor_predicate(const std::string& base_predicate) const {
  auto it = pred_origin_.find(base_predicate);
  if (it == pred_origin_.end()) return std::nullopt;
  return it->second;
}

PredicateTag SimLanguage::tag(const std::string& base_predicate) const {
  auto it = tags_.find(base_predicate);
  if (it == tags_.end()) throw UnknownSymbolError("unknown predicate '" + base_predicate + "'");
  return it->second;
}

SimLanguage build_sim_language(const Language& l1, const Language& l2) {
  if (l1.constants().empty()) throw Error("factor language " + l1.name() + " declares no constant");
  if (l2.constants().empty()) throw Error("factor language " + l2.name() + " declares no constant");

  SimLanguage sl;
  sl.factor1_ = l1;
  sl.factor2_ = l2;

  std::vector<std::string> constants;
  std::set<std::string> taken = {SimLanguage::kSim1, SimLanguage::kSim2};
  for (const auto& c1 : l1.constants()) {
    for (const auto& c2 : l2.constants()) {
      std::string name = "C_" + c1 + "_" + c2;
      if (!taken.insert(name).second) throw Error("product constant name collision: " + name);
      sl.const_map_[{c1, c2}] = name;
      sl.const_pairs_[name] = {c1, c2};
      constants.push_back(name);
    }
  }

  std::set<std::string> names1, names2;
  for (const auto& p : l1.predicates()) names1.insert(p.name);
  for (const auto& p : l2.predicates()) names2.insert(p.name);

  std::vector<PredicateSymbol> predicates;
  auto lift = [&](const Language& l, const std::set<std::string>& other_names, Factor k) {
    auto& map = k == Factor::First ? sl.pred_map1_ : sl.pred_map2_;
    for (const auto& p : l.predicates()) {
      std::string name = p.name;
      if (other_names.count(name) || taken.count(name)) name += "~" + std::to_string(factor_index(k));
      if (!taken.insert(name).second) throw Error("predicate name collision: " + name);
      map[p.name] = name;
      sl.pred_origin_[name] = {k, p.name};
      sl.tags_[name] = k == Factor::First ? PredicateTag::Factor1 : PredicateTag::Factor2;
      predicates.push_back({name, p.arity});
    }
  };
  lift(l1, names2, Factor::First);
  lift(l2, names1, Factor::Second);
  predicates.push_back({SimLanguage::kSim1, 2});
  predicates.push_back({SimLanguage::kSim2, 2});
  sl.tags_[SimLanguage::kSim1] = PredicateTag::Sim1;
  sl.tags_[SimLanguage::kSim2] = PredicateTag::Sim2;

  sl.base_ = Language(l1.name() + "_x_" + l2.name(), std::move(constants), std::move(predicates));
  return sl;
}

Tuple ProductEncoding::project(Factor k, std::span<const Element> t) const {
  Tuple out(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) out[i] = project(k, t[i]);
  return out;
}

// ---------------------------------------------------------------------------
// Standard conversion

namespace {

Formula sim_atom(Factor k, Term a, Term b) {
  return Formula::atom(SimLanguage::sim_name(k), {std::move(a), std::move(b)});
}

class Converter {
 public:
  Converter(Factor k, const SimLanguage& sl, const ConversionOptions& options, const Formula& input)
      : k_(k), sl_(sl), fresh_(reserved(input, sl)) {
    const auto& aux = sl.factor(other(k)).constants();
    if (options.auxiliary_constant >= aux.size())
      throw Error("auxiliary constant index " + std::to_string(options.auxiliary_constant) + " out of range");
    aux_ = aux[options.auxiliary_constant];
  }

  Formula convert(const Formula& f) {
    switch (f.kind()) {
      case FormulaKind::Verum:
      case FormulaKind::Falsum:
        return f;
      case FormulaKind::Equal: {
        const Term& a = f.terms()[0];
        const Term& b = f.terms()[1];
        if (a.is_variable() && b.is_variable()) return sim_atom(k_, a, b);
        if (a.is_variable()) return sim_atom(k_, a, lift(b));
        if (b.is_variable()) return sim_atom(k_, b, lift(a));
        return sim_atom(k_, lift(a), lift(b));
      }
      case FormulaKind::Atom: {
        const std::string& name = sl_.base_predicate(k_, f.predicate());
        bool all_variables = true;
        for (const auto& t : f.terms()) all_variables = all_variables && t.is_variable();
        if (all_variables) return Formula::atom(name, f.terms());
        // R(t) becomes (exists y)(R(y) and t_1 = y_1 and ... ), then converted.
        std::vector<std::string> ys;
        std::vector<Term> args;
        std::vector<Formula> parts;
        for (std::size_t i = 0; i < f.terms().size(); ++i) {
          ys.push_back(fresh_.next());
          args.push_back(Term::variable(ys.back()));
        }
        for (std::size_t i = 0; i < ys.size(); ++i)
          parts.push_back(convert(Formula::equal(f.terms()[i], args[i])));
        Formula body = Formula::conjunction(Formula::atom(name, args), conjoin(parts));
        return exists_all(ys, body);
      }
      case FormulaKind::Not:
        return Formula::negation(convert(f.body()));
      case FormulaKind::And:
        return Formula::conjunction(convert(f.lhs()), convert(f.rhs()));
      case FormulaKind::Or:
        return Formula::disjunction(convert(f.lhs()), convert(f.rhs()));
      case FormulaKind::Implies:
        return Formula::implication(convert(f.lhs()), convert(f.rhs()));
      case FormulaKind::Exists:
        return Formula::exists(f.variable(), convert(f.body()));
      case FormulaKind::Forall:
        return Formula::forall(f.variable(), convert(f.body()));
    }
    return f;
  }

 private:
  static std::set<std::string> reserved(const Formula& input, const SimLanguage& sl) {
    std::set<std::string> names = symbol_names(input);
    for (const auto& c : sl.base().constants()) names.insert(c);
    for (const auto& p : sl.base().predicates()) names.insert(p.name);
    return names;
  }

  Term lift(const Term& factor_constant) const {
    const std::string& name = k_ == Factor::First ? sl_.product_constant(factor_constant.name, aux_)
                                                  : sl_.product_constant(aux_, factor_constant.name);
    return Term::constant(name);
  }

  Factor k_;
  const SimLanguage& sl_;
  FreshNames fresh_;
  std::string aux_;
};

}  // namespace

Formula standard_conversion(const Formula& f, Factor k, const SimLanguage& sl, const ConversionOptions& options) {
  check_formula(f, sl.factor(k));
  Converter c(k, sl, options, f);
  return c.convert(f);
}

Formula tuple_sim(Factor k, std::span<const std::string> xs, std::span<const std::string> ys) {
  if (xs.size() != ys.size())
    throw Error("tuple_sim: tuples of lengths " + std::to_string(xs.size()) + " and " + std::to_string(ys.size()));
  if (xs.empty()) throw Error("tuple_sim: empty tuples");
  std::vector<Formula> parts;
  for (std::size_t i = 0; i < xs.size(); ++i)
    parts.push_back(sim_atom(k, Term::variable(xs[i]), Term::variable(ys[i])));
  return conjoin(parts);
}

// ---------------------------------------------------------------------------
// Axioms

namespace {

Formula var_sim(Factor k, const char* a, const char* b) {
  return sim_atom(k, Term::variable(a), Term::variable(b));
}

const std::vector<std::string> kCartesianLabels = {
    "sim1 reflexive",
    "sim1 symmetric",
    "sim1 transitive",
    "sim2 reflexive",
    "sim2 symmetric",
    "sim2 transitive",
    "sim1 and sim2 together separate points",
    "every sim1-class meets every sim2-class",
};

}  // namespace

std::vector<Formula> cartesian_axioms() {
  std::vector<Formula> out;
  const std::vector<std::string> xy = {"x", "y"};
  const std::vector<std::string> xyz = {"x", "y", "z"};
  for (Factor k : {Factor::First, Factor::Second}) {
    out.push_back(Formula::forall("x", var_sim(k, "x", "x")));
    out.push_back(forall_all(xy, Formula::implication(var_sim(k, "x", "y"), var_sim(k, "y", "x"))));
    out.push_back(forall_all(
        xyz, Formula::implication(Formula::conjunction(var_sim(k, "x", "y"), var_sim(k, "y", "z")),
                                  var_sim(k, "x", "z"))));
  }
  out.push_back(forall_all(
      xy, Formula::implication(Formula::conjunction(var_sim(Factor::First, "x", "y"), var_sim(Factor::Second, "x", "y")),
                               Formula::equal(Term::variable("x"), Term::variable("y")))));
  out.push_back(forall_all(
      xy, Formula::exists("z", Formula::conjunction(var_sim(Factor::First, "x", "z"), var_sim(Factor::Second, "y", "z")))));
  return out;
}

std::vector<Formula> congruence_axioms(const SimLanguage& sl) {
  std::vector<Formula> out;
  for (Factor k : {Factor::First, Factor::Second}) {
    for (const auto& p : sl.factor(k).predicates()) {
      std::vector<std::string> xs, ys;
      std::vector<Term> xt, yt;
      for (std::size_t i = 1; i <= p.arity; ++i) {
        xs.push_back("x" + std::to_string(i));
        ys.push_back("y" + std::to_string(i));
        xt.push_back(Term::variable(xs.back()));
        yt.push_back(Term::variable(ys.back()));
      }
      const std::string& name = sl.base_predicate(k, p.name);
      Formula body = Formula::implication(tuple_sim(k, xs, ys),
                                          biconditional(Formula::atom(name, xt), Formula::atom(name, yt)));
      std::vector<std::string> all = xs;
      all.insert(all.end(), ys.begin(), ys.end());
      out.push_back(forall_all(all, body));
    }
  }
  return out;
}

std::vector<Formula> build_t_sim(std::span<const Formula> t1, std::span<const Formula> t2, const SimLanguage& sl) {
  std::vector<Formula> out = cartesian_axioms();
  auto add = [&](std::span<const Formula> theory, Factor k) {
    for (const auto& s : theory) {
      if (!is_sentence(s)) throw Error("theory contains a formula with free variables: " + render_formula(s));
      out.push_back(standard_conversion(s, k, sl));
    }
  };
  add(t1, Factor::First);
  add(t2, Factor::Second);
  auto congruence = congruence_axioms(sl);
  out.insert(out.end(), congruence.begin(), congruence.end());
  return out;
}

// ---------------------------------------------------------------------------
// Product and decomposition

FiniteStructure product(const FiniteStructure& m1, const FiniteStructure& m2, const SimLanguage& sl) {
  if (!(m1.language() == sl.factor(Factor::First)))
    throw Error("first factor structure is not over language " + sl.factor(Factor::First).name());
  if (!(m2.language() == sl.factor(Factor::Second)))
    throw Error("second factor structure is not over language " + sl.factor(Factor::Second).name());

  ProductEncoding enc(m1.size(), m2.size());
  StructureBuilder b(sl.base(), enc.size(), m1.name() + "_x_" + m2.name());
  for (const auto& c1 : m1.language().constants())
    for (const auto& c2 : m2.language().constants())
      b.constant(sl.product_constant(c1, c2), enc.encode(m1.constant(c1), m2.constant(c2)));

  for (Factor k : {Factor::First, Factor::Second}) {
    const FiniteStructure& m = k == Factor::First ? m1 : m2;
    for (const auto& p : m.language().predicates()) {
      const Relation& r = m.relation(p.name);
      const std::string& name = sl.base_predicate(k, p.name);
      for_each_tuple(enc.size(), p.arity, [&](const Tuple& t) {
        if (r.holds(enc.project(k, t))) b.tuple(name, t);
        return true;
      });
    }
    for_each_tuple(enc.size(), 2, [&](const Tuple& t) {
      if (enc.project(k, t[0]) == enc.project(k, t[1])) b.tuple(SimLanguage::sim_name(k), t);
      return true;
    });
  }
  return b.build();
}

Decomposition decompose(const FiniteStructure& n, const SimLanguage& sl) {
  if (!(n.language() == sl.base())) throw Error("structure is not over the product language " + sl.base().name());

  auto cartesian = cartesian_axioms();
  auto congruence = congruence_axioms(sl);
  auto report = [&](std::span<const Formula> axioms, auto label) {
    CheckReport r = check_sentences(n, axioms);
    for (std::size_t i = 0; i < r.verdicts.size(); ++i) {
      const auto& v = r.verdicts[i];
      if (v.holds) continue;
      std::string detail = render_formula(v.sentence);
      if (v.counterexample) detail += " fails at " + format_assignment(*v.counterexample);
      throw AxiomViolation(label(i), detail);
    }
  };
  report(cartesian, [&](std::size_t i) { return kCartesianLabels[i]; });
  report(congruence, [&](std::size_t i) {
    std::vector<std::string> names;
    for (Factor k : {Factor::First, Factor::Second})
      for (const auto& p : sl.factor(k).predicates()) names.push_back(sl.base_predicate(k, p.name));
    return "congruence of " + names[i];
  });

  const Relation& sim1 = n.relation(SimLanguage::kSim1);
  const Relation& sim2 = n.relation(SimLanguage::kSim2);
  auto classes = [&](const Relation& sim, std::vector<Element>& index, std::vector<Element>& reps) {
    index.assign(n.size(), 0);
    for (Element x = 0; x < n.size(); ++x) {
      Element rep = x;
      for (Element y = 0; y < x; ++y) {
        if (sim.holds(std::vector<Element>{x, y})) {
          rep = y;
          break;
        }
      }
      if (rep == x) {
        index[x] = static_cast<Element>(reps.size());
        reps.push_back(x);
      } else {
        index[x] = index[rep];
      }
    }
  };
  std::vector<Element> index1, index2, reps1, reps2;
  classes(sim1, index1, reps1);
  classes(sim2, index2, reps2);

  // Every product constant with first component c1 must lie in one sim1-class.
  auto coherent_constant = [&](Factor k, const std::string& c) {
    const auto& index = k == Factor::First ? index1 : index2;
    const auto& others = sl.factor(other(k)).constants();
    std::optional<Element> cls;
    for (const auto& d : others) {
      const std::string& pc = k == Factor::First ? sl.product_constant(c, d) : sl.product_constant(d, c);
      Element e = index[n.constant(pc)];
      if (cls && *cls != e)
        throw AxiomViolation("constant coherence",
                             "product constants for factor constant " + c + " lie in different sim" +
                                 std::to_string(factor_index(k)) + "-classes");
      cls = e;
    }
    return *cls;
  };

  auto quotient = [&](Factor k) {
    const Language& l = sl.factor(k);
    const auto& reps = k == Factor::First ? reps1 : reps2;
    StructureBuilder b(l, reps.size(), n.name() + "_q" + std::to_string(factor_index(k)));
    for (const auto& c : l.constants()) b.constant(c, coherent_constant(k, c));
    for (const auto& p : l.predicates()) {
      const Relation& r = n.relation(sl.base_predicate(k, p.name));
      for_each_tuple(reps.size(), p.arity, [&](const Tuple& t) {
        Tuple lifted(t.size());
        for (std::size_t i = 0; i < t.size(); ++i) lifted[i] = reps[t[i]];
        if (r.holds(lifted)) b.tuple(p.name, t);
        return true;
      });
    }
    return b.build();
  };

  Decomposition d{quotient(Factor::First), quotient(Factor::Second), {}};
  ProductEncoding enc(reps1.size(), reps2.size());
  d.sigma.resize(n.size());
  for (Element x = 0; x < n.size(); ++x) d.sigma[x] = enc.encode(index1[x], index2[x]);
  return d;
}

}  // namespace simprod
