#include "simprod/structure.hpp"

#include <algorithm>
#include <functional>

#include "simprod/error.hpp"

namespace simprod {

// ---------------------------------------------------------------------------
// Relation

Relation::Relation(std::size_t universe, std::size_t arity) : universe_(universe), arity_(arity) {
  std::size_t cells = 1;
  for (std::size_t i = 0; i < arity; ++i) {
    if (universe != 0 && cells > kMaxRelationCells / universe)
      throw Error("relation of arity " + std::to_string(arity) + " over " + std::to_string(universe) +
                  " elements exceeds the supported table size");
    cells *= universe;
  }
  table_.assign(cells, 0);
}

std::size_t Relation::index(std::span<const Element> tuple) const {
  if (tuple.size() != arity_)
    throw ArityError("tuple of length " + std::to_string(tuple.size()) + " for a relation of arity " +
                     std::to_string(arity_));
  std::size_t idx = 0;
  for (Element e : tuple) {
    if (e >= universe_) throw Error("element " + std::to_string(e) + " out of range");
    idx = idx * universe_ + e;
  }
  return idx;
}

std::size_t Relation::count() const {
  return static_cast<std::size_t>(std::count(table_.begin(), table_.end(), std::uint8_t{1}));
}

std::vector<Tuple> Relation::tuples() const {
  std::vector<Tuple> out;
  for_each_tuple(universe_, arity_, [&](const Tuple& t) {
    if (holds(t)) out.push_back(t);
    return true;
  });
  return out;
}

// ---------------------------------------------------------------------------
// FiniteStructure

Element FiniteStructure::constant(std::string_view name) const {
  auto idx = lang_.constant_index(name);
  if (!idx) throw UnknownSymbolError("unknown constant '" + std::string(name) + "'");
  return constants_[*idx];
}

const Relation& FiniteStructure::relation(std::string_view predicate) const {
  auto idx = lang_.predicate_index(predicate);
  if (!idx) throw UnknownSymbolError("unknown predicate '" + std::string(predicate) + "'");
  return relations_[*idx];
}

StructureBuilder::StructureBuilder(Language lang, std::size_t size, std::string name) {
  if (size == 0) throw Error("structure universe must be nonempty");
  s_.name_ = std::move(name);
  s_.size_ = size;
  s_.constants_.assign(lang.constants().size(), 0);
  assigned_.assign(lang.constants().size(), false);
  for (const auto& p : lang.predicates()) s_.relations_.emplace_back(size, p.arity);
  s_.lang_ = std::move(lang);
}

StructureBuilder& StructureBuilder::constant(std::string_view name, Element value) {
  auto idx = s_.lang_.constant_index(name);
  if (!idx) throw UnknownSymbolError("unknown constant '" + std::string(name) + "'");
  if (value >= s_.size_)
    throw Error("constant '" + std::string(name) + "' interpreted out of range: " + std::to_string(value));
  s_.constants_[*idx] = value;
  assigned_[*idx] = true;
  return *this;
}

StructureBuilder& StructureBuilder::set(std::string_view predicate, std::span<const Element> tuple,
                                        bool value) {
  auto idx = s_.lang_.predicate_index(predicate);
  if (!idx) throw UnknownSymbolError("unknown predicate '" + std::string(predicate) + "'");
  s_.relations_[*idx].set(tuple, value);
  return *this;
}

StructureBuilder& StructureBuilder::tuple(std::string_view predicate, std::span<const Element> tuple) {
  return set(predicate, tuple, true);
}

FiniteStructure StructureBuilder::build() const {
  for (std::size_t i = 0; i < assigned_.size(); ++i)
    if (!assigned_[i]) throw Error("constant '" + s_.lang_.constants()[i] + "' has no interpretation");
  return s_;
}

// ---------------------------------------------------------------------------
// Evaluation

CompiledFormula::CompiledFormula(const FiniteStructure& s, const Formula& f, std::span<const std::string> vars)
    : s_(&s), arity_(vars.size()) {
  std::map<std::string, std::size_t> scope;
  for (std::size_t i = 0; i < vars.size(); ++i) scope[vars[i]] = i;
  slots_ = vars.size();
  const Language& lang = s.language();

  std::function<std::size_t(const Formula&)> compile = [&](const Formula& g) -> std::size_t {
    Node node{g.kind(), {}, nullptr, 0, 0, 0};
    auto arg = [&](const Term& t) -> std::pair<bool, Element> {
      if (t.is_constant()) return {true, s.constant(t.name)};
      auto it = scope.find(t.name);
      if (it == scope.end()) throw Error("unbound free variable '" + t.name + "'");
      return {false, static_cast<Element>(it->second)};
    };
    switch (g.kind()) {
      case FormulaKind::Verum:
      case FormulaKind::Falsum:
        break;
      case FormulaKind::Equal:
        for (const auto& t : g.terms()) node.args.push_back(arg(t));
        break;
      case FormulaKind::Atom: {
        if (lang.arity(g.predicate()) != g.terms().size())
          throw ArityError("predicate '" + g.predicate() + "' applied to " + std::to_string(g.terms().size()) +
                           " arguments");
        node.relation = &s.relation(g.predicate());
        for (const auto& t : g.terms()) node.args.push_back(arg(t));
        break;
      }
      case FormulaKind::Not:
        node.a = compile(g.body());
        break;
      case FormulaKind::Exists:
      case FormulaKind::Forall: {
        std::size_t slot = slots_++;
        std::optional<std::size_t> shadowed;
        if (auto it = scope.find(g.variable()); it != scope.end()) shadowed = it->second;
        scope[g.variable()] = slot;
        node.slot = slot;
        node.a = compile(g.body());
        if (shadowed) scope[g.variable()] = *shadowed;
        else scope.erase(g.variable());
        break;
      }
      default:
        node.a = compile(g.lhs());
        node.b = compile(g.rhs());
    }
    nodes_.push_back(std::move(node));
    return nodes_.size() - 1;
  };
  root_ = compile(f);
}

bool CompiledFormula::eval(std::size_t idx, std::vector<Element>& env) const {
  const Node& n = nodes_[idx];
  auto value = [&](const std::pair<bool, Element>& a) { return a.first ? a.second : env[a.second]; };
  switch (n.kind) {
    case FormulaKind::Verum: return true;
    case FormulaKind::Falsum: return false;
    case FormulaKind::Equal: return value(n.args[0]) == value(n.args[1]);
    case FormulaKind::Atom: {
      const Relation& r = *n.relation;
      std::size_t cell = 0;
      for (const auto& a : n.args) cell = cell * r.universe_ + value(a);
      return r.table_[cell] != 0;
    }
    case FormulaKind::Not: return !eval(n.a, env);
    case FormulaKind::And: return eval(n.a, env) && eval(n.b, env);
    case FormulaKind::Or: return eval(n.a, env) || eval(n.b, env);
    case FormulaKind::Implies: return !eval(n.a, env) || eval(n.b, env);
    case FormulaKind::Exists:
      for (Element e = 0; e < s_->size(); ++e) {
        env[n.slot] = e;
        if (eval(n.a, env)) return true;
      }
      return false;
    case FormulaKind::Forall:
      for (Element e = 0; e < s_->size(); ++e) {
        env[n.slot] = e;
        if (!eval(n.a, env)) return false;
      }
      return true;
  }
  return false;
}

bool CompiledFormula::operator()(std::span<const Element> values) const {
  if (values.size() != arity_) throw Error("wrong number of values for compiled formula");
  std::vector<Element> env(slots_, 0);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] >= s_->size()) throw Error("element " + std::to_string(values[i]) + " out of range");
    env[i] = values[i];
  }
  return eval(root_, env);
}

bool evaluate(const FiniteStructure& s, const Formula& f, const Assignment& a) {
  std::vector<std::string> vars;
  Tuple values;
  for (const auto& [name, value] : a) {
    vars.push_back(name);
    values.push_back(value);
  }
  return CompiledFormula(s, f, vars)(values);
}

std::vector<Tuple> definable_set(const FiniteStructure& s, const Formula& f,
                                 std::span<const std::string> vars) {
  CompiledFormula cf(s, f, vars);
  std::vector<Tuple> out;
  for_each_tuple(s.size(), vars.size(), [&](const Tuple& t) {
    if (cf(t)) out.push_back(t);
    return true;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Sentence checking

bool CheckReport::passed() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const auto& v) { return v.holds; });
}

const SentenceVerdict* CheckReport::first_failure() const {
  for (const auto& v : verdicts)
    if (!v.holds) return &v;
  return nullptr;
}

CheckReport check_sentences(const FiniteStructure& s, std::span<const Formula> sentences) {
  CheckReport report;
  for (const auto& sentence : sentences) {
    if (!is_sentence(sentence))
      throw Error("not a sentence (free variables present): " + render_formula(sentence));
    std::vector<std::string> block;
    const Formula* body = &sentence;
    while (body->is(FormulaKind::Forall)) {
      block.push_back(body->variable());
      body = &body->body();
    }
    CompiledFormula cf(s, *body, block);
    SentenceVerdict verdict{sentence, true, std::nullopt};
    for_each_tuple(s.size(), block.size(), [&](const Tuple& t) {
      if (cf(t)) return true;
      verdict.holds = false;
      Assignment a;
      for (std::size_t i = 0; i < block.size(); ++i) a[block[i]] = t[i];
      verdict.counterexample = std::move(a);
      return false;
    });
    report.verdicts.push_back(std::move(verdict));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Isomorphism

namespace {

// Per-element counts of tuples containing the element at each position.
std::vector<std::vector<std::size_t>> element_signatures(const FiniteStructure& s) {
  std::vector<std::vector<std::size_t>> sig(s.size());
  for (const auto& r : s.relations()) {
    std::vector<std::vector<std::size_t>> counts(s.size(), std::vector<std::size_t>(r.arity() + 1, 0));
    for (const auto& t : r.tuples()) {
      for (std::size_t pos = 0; pos < t.size(); ++pos) ++counts[t[pos]][pos];
      if (std::all_of(t.begin(), t.end(), [&](Element e) { return e == t[0]; })) ++counts[t[0]][r.arity()];
    }
    for (std::size_t e = 0; e < s.size(); ++e) sig[e].insert(sig[e].end(), counts[e].begin(), counts[e].end());
  }
  return sig;
}

}  // namespace

bool is_isomorphism(const FiniteStructure& a, const FiniteStructure& b, std::span<const Element> map) {
  if (!(a.language() == b.language()) || a.size() != b.size() || map.size() != a.size()) return false;
  std::vector<bool> hit(b.size(), false);
  for (Element e : map) {
    if (e >= b.size() || hit[e]) return false;
    hit[e] = true;
  }
  for (std::size_t i = 0; i < a.constants().size(); ++i)
    if (map[a.constants()[i]] != b.constants()[i]) return false;
  for (std::size_t r = 0; r < a.relations().size(); ++r) {
    const Relation& ra = a.relations()[r];
    const Relation& rb = b.relations()[r];
    bool ok = for_each_tuple(a.size(), ra.arity(), [&](const Tuple& t) {
      Tuple image(t.size());
      for (std::size_t i = 0; i < t.size(); ++i) image[i] = map[t[i]];
      return ra.holds(t) == rb.holds(image);
    });
    if (!ok) return false;
  }
  return true;
}

std::optional<std::vector<Element>> isomorphic(const FiniteStructure& a, const FiniteStructure& b) {
  if (!(a.language() == b.language())) throw Error("isomorphism check across different languages");
  if (a.size() != b.size()) return std::nullopt;
  const std::size_t n = a.size();
  constexpr Element kUnset = ~Element{0};

  std::vector<Element> map(n, kUnset);
  std::vector<Element> inverse(n, kUnset);
  for (std::size_t i = 0; i < a.constants().size(); ++i) {
    Element x = a.constants()[i];
    Element y = b.constants()[i];
    if ((map[x] != kUnset && map[x] != y) || (inverse[y] != kUnset && inverse[y] != x)) return std::nullopt;
    map[x] = y;
    inverse[y] = x;
  }

  auto sig_a = element_signatures(a);
  auto sig_b = element_signatures(b);
  for (Element x = 0; x < n; ++x)
    if (map[x] != kUnset && sig_a[x] != sig_b[map[x]]) return std::nullopt;

  // Constants first, then the rest in increasing order.
  std::vector<Element> order;
  for (Element x = 0; x < n; ++x)
    if (map[x] != kUnset) order.push_back(x);
  for (Element x = 0; x < n; ++x)
    if (map[x] == kUnset) order.push_back(x);

  std::vector<Element> placed;
  // Checks all tuples over `placed` that mention `x`.
  auto consistent = [&](Element x) {
    for (std::size_t r = 0; r < a.relations().size(); ++r) {
      const Relation& ra = a.relations()[r];
      const Relation& rb = b.relations()[r];
      std::size_t k = ra.arity();
      bool ok = for_each_tuple(placed.size(), k, [&](const Tuple& idx) {
        Tuple t(k), image(k);
        bool mentions = false;
        for (std::size_t i = 0; i < k; ++i) {
          t[i] = placed[idx[i]];
          image[i] = map[t[i]];
          mentions = mentions || t[i] == x;
        }
        return !mentions || ra.holds(t) == rb.holds(image);
      });
      if (!ok) return false;
    }
    return true;
  };

  std::function<bool(std::size_t)> search = [&](std::size_t depth) -> bool {
    if (depth == n) return true;
    Element x = order[depth];
    if (map[x] != kUnset) {
      // Forced by a constant.
      placed.push_back(x);
      if (consistent(x) && search(depth + 1)) return true;
      placed.pop_back();
      return false;
    }
    for (Element y = 0; y < n; ++y) {
      if (inverse[y] != kUnset || sig_a[x] != sig_b[y]) continue;
      map[x] = y;
      inverse[y] = x;
      placed.push_back(x);
      if (consistent(x) && search(depth + 1)) return true;
      placed.pop_back();
      map[x] = kUnset;
      inverse[y] = kUnset;
    }
    return false;
  };

  if (!search(0)) return std::nullopt;
  return map;
}

FiniteStructure permute(const FiniteStructure& s, std::span<const Element> perm) {
  if (perm.size() != s.size()) throw Error("permutation size does not match structure size");
  StructureBuilder b(s.language(), s.size(), s.name());
  for (std::size_t i = 0; i < s.language().constants().size(); ++i)
    b.constant(s.language().constants()[i], perm[s.constants()[i]]);
  for (std::size_t r = 0; r < s.relations().size(); ++r) {
    for (const auto& t : s.relations()[r].tuples()) {
      Tuple image(t.size());
      for (std::size_t i = 0; i < t.size(); ++i) image[i] = perm[t[i]];
      b.tuple(s.language().predicates()[r].name, image);
    }
  }
  return b.build();
}

std::string format_tuple(std::span<const Element> t) {
  std::string out = "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(t[i]);
  }
  return out + ")";
}

std::string format_assignment(const Assignment& a) {
  std::string out = "{";
  bool first = true;
  for (const auto& [name, value] : a) {
    if (!first) out += ", ";
    first = false;
    out += name + ":" + std::to_string(value);
  }
  return out + "}";
}

}  // namespace simprod
