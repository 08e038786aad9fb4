#include "simprod/normal_form.hpp"

#include <algorithm>
#include <set>

#include "simprod/error.hpp"

namespace simprod {

namespace {

Formula nnf(const Formula& f, bool negate) {
  switch (f.kind()) {
    case FormulaKind::Verum:
      return negate ? Formula::falsum() : f;
    case FormulaKind::Falsum:
      return negate ? Formula::verum() : f;
    case FormulaKind::Equal:
    case FormulaKind::Atom:
      return negate ? Formula::negation(f) : f;
    case FormulaKind::Not:
      return nnf(f.body(), !negate);
    case FormulaKind::And:
      return negate ? Formula::disjunction(nnf(f.lhs(), true), nnf(f.rhs(), true))
                    : Formula::conjunction(nnf(f.lhs(), false), nnf(f.rhs(), false));
    case FormulaKind::Or:
      return negate ? Formula::conjunction(nnf(f.lhs(), true), nnf(f.rhs(), true))
                    : Formula::disjunction(nnf(f.lhs(), false), nnf(f.rhs(), false));
    case FormulaKind::Implies:
      return negate ? Formula::conjunction(nnf(f.lhs(), false), nnf(f.rhs(), true))
                    : Formula::disjunction(nnf(f.lhs(), true), nnf(f.rhs(), false));
    case FormulaKind::Exists:
      return negate ? Formula::forall(f.variable(), nnf(f.body(), true))
                    : Formula::exists(f.variable(), nnf(f.body(), false));
    case FormulaKind::Forall:
      return negate ? Formula::exists(f.variable(), nnf(f.body(), true))
                    : Formula::forall(f.variable(), nnf(f.body(), false));
  }
  return f;
}

// Factor-side constructors absorbing true/false.

Formula f_and(const Formula& a, const Formula& b) {
  if (a.is(FormulaKind::Verum)) return b;
  if (b.is(FormulaKind::Verum)) return a;
  if (a.is(FormulaKind::Falsum) || b.is(FormulaKind::Falsum)) return Formula::falsum();
  return Formula::conjunction(a, b);
}

Formula f_or(const Formula& a, const Formula& b) {
  if (a.is(FormulaKind::Falsum)) return b;
  if (b.is(FormulaKind::Falsum)) return a;
  if (a.is(FormulaKind::Verum) || b.is(FormulaKind::Verum)) return Formula::verum();
  return Formula::disjunction(a, b);
}

Formula f_not(const Formula& a) {
  if (a.is(FormulaKind::Verum)) return Formula::falsum();
  if (a.is(FormulaKind::Falsum)) return Formula::verum();
  if (a.is(FormulaKind::Not)) return a.body();
  return Formula::negation(a);
}

// Universes are nonempty, so a vacuous quantifier can be dropped.
Formula f_exists(const std::string& y, const Formula& a) {
  auto fv = free_variables(a);
  if (std::find(fv.begin(), fv.end(), y) == fv.end()) return a;
  return Formula::exists(y, a);
}

using Disjuncts = std::vector<SimpleFormula>;

void push(Disjuncts& out, Formula a, Formula b) {
  if (a.is(FormulaKind::Falsum) || b.is(FormulaKind::Falsum)) return;
  out.push_back({std::move(a), std::move(b)});
}

class Simplifier {
 public:
  Simplifier(const SimLanguage& sl, const SimplifyOptions& options) : sl_(sl), options_(options) {}

  Disjuncts run(const Formula& f) {
    switch (f.kind()) {
      case FormulaKind::Verum:
        return {{Formula::verum(), Formula::verum()}};
      case FormulaKind::Falsum:
        return {};
      case FormulaKind::Equal:
      case FormulaKind::Atom:
        return atomic(f);
      case FormulaKind::Not:
        return negate(run(f.body()));
      case FormulaKind::And:
        return cross(run(f.lhs()), run(f.rhs()));
      case FormulaKind::Or: {
        Disjuncts out = run(f.lhs());
        Disjuncts rhs = run(f.rhs());
        out.insert(out.end(), rhs.begin(), rhs.end());
        return tidy(std::move(out));
      }
      case FormulaKind::Exists:
        return exists(f.variable(), run(f.body()));
      case FormulaKind::Forall:
        // forall y phi  ==  not exists y (not phi)
        return negate(exists(f.variable(), run(nnf(f.body(), true))));
      case FormulaKind::Implies:
        return run(nnf(f, false));
    }
    return {};
  }

 private:
  Term project(Factor k, const Term& t) const {
    if (t.is_variable()) return t;
    const auto& pair = sl_.constant_pair(t.name);
    return Term::constant(k == Factor::First ? pair.first : pair.second);
  }

  Disjuncts atomic(const Formula& f) const {
    if (f.is(FormulaKind::Equal)) {
      const Term& a = f.terms()[0];
      const Term& b = f.terms()[1];
      // x = y  iff  x sim1 y and x sim2 y
      return {{Formula::equal(project(Factor::First, a), project(Factor::First, b)),
               Formula::equal(project(Factor::Second, a), project(Factor::Second, b))}};
    }
    const std::string& name = f.predicate();
    if (!sl_.base().has_predicate(name)) throw UnknownSymbolError("unknown predicate '" + name + "'");
    if (sl_.base().arity(name) != f.terms().size()) throw ArityError("arity mismatch for '" + name + "'");
    PredicateTag tag = sl_.tag(name);
    if (tag == PredicateTag::Sim1 || tag == PredicateTag::Sim2) {
      Factor k = tag == PredicateTag::Sim1 ? Factor::First : Factor::Second;
      Formula eq = Formula::equal(project(k, f.terms()[0]), project(k, f.terms()[1]));
      return k == Factor::First ? Disjuncts{{eq, Formula::verum()}} : Disjuncts{{Formula::verum(), eq}};
    }
    // A lifted predicate depends only on the k-th coordinate of its arguments,
    // so product constants are replaced by their k-th factor constant.
    auto origin = sl_.factor_predicate(name);
    Factor k = origin->first;
    std::vector<Term> args;
    for (const auto& t : f.terms()) args.push_back(project(k, t));
    Formula a = Formula::atom(origin->second, std::move(args));
    return k == Factor::First ? Disjuncts{{a, Formula::verum()}} : Disjuncts{{Formula::verum(), a}};
  }

  Disjuncts cross(const Disjuncts& x, const Disjuncts& y) const {
    Disjuncts out;
    for (const auto& p : x)
      for (const auto& q : y) push(out, f_and(p.psi1, q.psi1), f_and(p.psi2, q.psi2));
    return tidy(std::move(out));
  }

  // The witness for a simple formula can be chosen coordinatewise.
  Disjuncts exists(const std::string& y, const Disjuncts& d) const {
    Disjuncts out;
    for (const auto& p : d) push(out, f_exists(y, p.psi1), f_exists(y, p.psi2));
    return tidy(std::move(out));
  }

  // not (a1 & b1 | ... | an & bn)  ==  AND_i ((not ai, true) | (true, not bi)).
  // Disjuncts sharing a component are merged first: (a, b) | (a, b') == (a, b | b').
  Disjuncts negate(const Disjuncts& d) const {
    Disjuncts merged = merge(merge(d, true), false);
    Disjuncts out = {{Formula::verum(), Formula::verum()}};
    for (const auto& p : merged) {
      Disjuncts pair;
      push(pair, f_not(p.psi1), Formula::verum());
      push(pair, Formula::verum(), f_not(p.psi2));
      out = cross(out, pair);
    }
    return out;
  }

  static Disjuncts merge(const Disjuncts& d, bool on_first) {
    Disjuncts out;
    for (const auto& p : d) {
      const Formula& key = on_first ? p.psi1 : p.psi2;
      auto it = std::find_if(out.begin(), out.end(),
                             [&](const SimpleFormula& q) { return (on_first ? q.psi1 : q.psi2) == key; });
      if (it == out.end()) {
        out.push_back(p);
      } else if (on_first) {
        it->psi2 = f_or(it->psi2, p.psi2);
      } else {
        it->psi1 = f_or(it->psi1, p.psi1);
      }
    }
    return out;
  }

  Disjuncts tidy(Disjuncts d) const {
    if (!options_.dedupe) return d;
    return dedupe_disjuncts(SemiSimpleFormula{std::move(d), {}}).disjuncts;
  }

  const SimLanguage& sl_;
  SimplifyOptions options_;
};

void check_base_terms(const Formula& f, const SimLanguage& sl) {
  check_formula(f, sl.base());
}

}  // namespace

Formula to_nnf(const Formula& f) { return nnf(f, false); }

SemiSimpleFormula semi_simplify(const Formula& f, const SimLanguage& sl, const SimplifyOptions& options) {
  check_base_terms(f, sl);
  Simplifier s(sl, options);
  SemiSimpleFormula out;
  out.disjuncts = s.run(to_nnf(f));
  out.free_vars = free_variables(f);
  return out;
}

Formula realize(const SemiSimpleFormula& ssf, const SimLanguage& sl) {
  std::vector<Formula> parts;
  parts.reserve(ssf.disjuncts.size());
  for (const auto& d : ssf.disjuncts)
    parts.push_back(Formula::conjunction(standard_conversion(d.psi1, Factor::First, sl),
                                         standard_conversion(d.psi2, Factor::Second, sl)));
  return disjoin(parts);
}

SemiSimpleFormula dedupe_disjuncts(SemiSimpleFormula ssf) {
  std::vector<SimpleFormula> kept;
  for (auto& d : ssf.disjuncts)
    if (std::find(kept.begin(), kept.end(), d) == kept.end()) kept.push_back(std::move(d));
  ssf.disjuncts = std::move(kept);
  return ssf;
}

EquivalenceResult check_equivalent(const FiniteStructure& s, const Formula& f, const Formula& g) {
  auto fv = free_variables(f);
  auto gv = free_variables(g);
  if (std::set<std::string>(fv.begin(), fv.end()) != std::set<std::string>(gv.begin(), gv.end()))
    throw Error("free variables differ: " + render_formula(f) + " vs " + render_formula(g));
  return check_equivalent(s, f, g, fv);
}

EquivalenceResult check_equivalent(const FiniteStructure& s, const Formula& f, const Formula& g,
                                   std::span<const std::string> vars) {
  CompiledFormula cf(s, f, vars);
  CompiledFormula cg(s, g, vars);
  EquivalenceResult result;
  for_each_tuple(s.size(), vars.size(), [&](const Tuple& t) {
    if (cf(t) == cg(t)) return true;
    result.equivalent = false;
    Assignment a;
    for (std::size_t i = 0; i < vars.size(); ++i) a[vars[i]] = t[i];
    result.counterexample = std::move(a);
    return false;
  });
  return result;
}

}  // namespace simprod
