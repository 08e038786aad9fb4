#include "oracles.hpp"

#include <algorithm>
#include <numeric>

using namespace simprod;

namespace oracle {

namespace {

Element value(const Term& t, const FiniteStructure& s, const Env& env) {
  if (t.is_constant()) return s.constant(t.name);
  return env.at(t.name);
}

}  // namespace

bool holds(const FiniteStructure& s, const Formula& f, Env env) {
  switch (f.kind()) {
    case FormulaKind::Verum:
      return true;
    case FormulaKind::Falsum:
      return false;
    case FormulaKind::Equal:
      return value(f.terms()[0], s, env) == value(f.terms()[1], s, env);
    case FormulaKind::Atom: {
      Tuple t;
      for (const auto& term : f.terms()) t.push_back(value(term, s, env));
      return s.holds(f.predicate(), t);
    }
    case FormulaKind::Not:
      return !holds(s, f.body(), env);
    case FormulaKind::And:
      return holds(s, f.lhs(), env) && holds(s, f.rhs(), env);
    case FormulaKind::Or:
      return holds(s, f.lhs(), env) || holds(s, f.rhs(), env);
    case FormulaKind::Implies:
      return !holds(s, f.lhs(), env) || holds(s, f.rhs(), env);
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
      bool universal = f.is(FormulaKind::Forall);
      for (Element e = 0; e < s.size(); ++e) {
        env[f.variable()] = e;
        bool b = holds(s, f.body(), env);
        if (universal && !b) return false;
        if (!universal && b) return true;
      }
      return universal;
    }
  }
  return false;
}

std::vector<Tuple> all_tuples(std::size_t n, std::size_t arity) {
  std::vector<Tuple> out{Tuple{}};
  for (std::size_t i = 0; i < arity; ++i) {
    std::vector<Tuple> next;
    for (const auto& t : out)
      for (Element e = 0; e < n; ++e) {
        Tuple u = t;
        u.push_back(e);
        next.push_back(u);
      }
    out = std::move(next);
  }
  return out;
}

std::vector<Tuple> satisfying(const FiniteStructure& s, const Formula& f, const std::vector<std::string>& vars) {
  std::vector<Tuple> out;
  for (const auto& t : all_tuples(s.size(), vars.size())) {
    Env env;
    for (std::size_t i = 0; i < vars.size(); ++i) env[vars[i]] = t[i];
    if (holds(s, f, env)) out.push_back(t);
  }
  return out;
}

bool isomorphic(const FiniteStructure& a, const FiniteStructure& b) {
  if (a.size() != b.size() || !(a.language() == b.language())) return false;
  std::vector<Element> perm(a.size());
  std::iota(perm.begin(), perm.end(), 0);
  const Language& lang = a.language();
  do {
    bool ok = true;
    for (const auto& c : lang.constants()) ok = ok && perm[a.constant(c)] == b.constant(c);
    for (const auto& p : lang.predicates()) {
      if (!ok) break;
      for (const auto& t : all_tuples(a.size(), p.arity)) {
        Tuple image;
        for (Element e : t) image.push_back(perm[e]);
        if (a.holds(p.name, t) != b.holds(p.name, image)) {
          ok = false;
          break;
        }
      }
    }
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

std::size_t vc_dim(const FiniteStructure& s, const Formula& f, const std::vector<std::string>& objects,
                   const std::vector<std::string>& params, const std::vector<Tuple>& object_space,
                   const std::vector<Tuple>& param_space) {
  const std::size_t n = object_space.size();
  // Trace of each parameter tuple as a bitmask over the object space.
  std::set<unsigned long> traces;
  for (const auto& b : param_space) {
    unsigned long mask = 0;
    for (std::size_t i = 0; i < n; ++i) {
      Env env;
      for (std::size_t j = 0; j < objects.size(); ++j) env[objects[j]] = object_space[i][j];
      for (std::size_t j = 0; j < params.size(); ++j) env[params[j]] = b[j];
      if (holds(s, f, env)) mask |= 1UL << i;
    }
    traces.insert(mask);
  }
  std::size_t best = 0;
  for (unsigned long subset = 0; subset < (1UL << n); ++subset) {
    std::size_t size = static_cast<std::size_t>(__builtin_popcountl(subset));
    if (size <= best) continue;
    std::set<unsigned long> cut;
    for (unsigned long t : traces) cut.insert(t & subset);
    if (cut.size() == (1UL << size)) best = size;
  }
  return best;
}

bool indiscernible(const FiniteStructure& s, const std::vector<Element>& seq, const Formula& f,
                   const std::vector<std::string>& slots, const std::optional<std::string>& param,
                   const std::vector<Element>& params) {
  const std::size_t n = slots.size();
  std::vector<std::optional<Element>> param_values;
  if (param) {
    for (Element p : params) param_values.push_back(p);
  } else {
    param_values.push_back(std::nullopt);
  }
  for (const auto& p : param_values) {
    std::set<bool> seen;
    // Increasing index tuples via bitmasks with n bits set.
    for (unsigned long mask = 0; mask < (1UL << seq.size()); ++mask) {
      if (static_cast<std::size_t>(__builtin_popcountl(mask)) != n) continue;
      Env env;
      std::size_t slot = 0;
      for (std::size_t i = 0; i < seq.size(); ++i)
        if (mask & (1UL << i)) env[slots[slot++]] = seq[i];
      if (p) env[*param] = *p;
      seen.insert(holds(s, f, env));
    }
    if (seen.size() > 1) return false;
  }
  return true;
}

}  // namespace oracle
