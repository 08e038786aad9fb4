#include "simprod/random.hpp"

#include <limits>

#include "simprod/error.hpp"

namespace simprod {

std::size_t Rng::below(std::size_t n) {
  if (n == 0) throw Error("Rng::below needs a positive bound");
  // Rejection sampling keeps the draw exactly uniform.
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t r;
  do {
    r = next();
  } while (r >= limit);
  return static_cast<std::size_t>(r % bound);
}

std::vector<Element> Rng::permutation(std::size_t n) {
  std::vector<Element> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<Element>(i);
  for (std::size_t i = n; i > 1; --i) std::swap(p[i - 1], p[below(i)]);
  return p;
}

Language random_language(Rng& rng, const RandomLanguageOptions& options) {
  if (options.max_arity == 0) throw Error("predicate arity bound must be positive");
  std::vector<std::string> constants;
  std::size_t nc = rng.between(options.min_constants, options.max_constants);
  for (std::size_t i = 0; i < nc; ++i) constants.push_back(options.constant_prefix + std::to_string(i));
  std::vector<PredicateSymbol> preds;
  std::size_t np = rng.between(options.min_predicates, options.max_predicates);
  for (std::size_t i = 0; i < np; ++i)
    preds.push_back({options.predicate_prefix + std::to_string(i), rng.between(1, options.max_arity)});
  return Language(options.name, std::move(constants), std::move(preds));
}

FiniteStructure random_structure(Rng& rng, const Language& lang, std::size_t min_size, std::size_t max_size,
                                 std::string name) {
  if (max_size > kMaxRandomStructureSize)
    throw Error("random structure size " + std::to_string(max_size) + " exceeds the bound " +
                std::to_string(kMaxRandomStructureSize));
  if (min_size == 0 || min_size > max_size) throw Error("invalid random structure size range");
  std::size_t size = rng.between(min_size, max_size);
  StructureBuilder b(lang, size, std::move(name));
  for (const auto& c : lang.constants()) b.constant(c, static_cast<Element>(rng.below(size)));
  for (const auto& p : lang.predicates()) {
    for_each_tuple(size, p.arity, [&](const Tuple& t) {
      if (rng.chance(1, 2)) b.tuple(p.name, t);
      return true;
    });
  }
  return b.build();
}

namespace {

class FormulaGenerator {
 public:
  FormulaGenerator(Rng& rng, const Language& lang, const RandomFormulaOptions& options)
      : rng_(rng), lang_(lang), options_(options), budget_(options.max_operators) {}

  Formula run() { return gen(options_.depth, options_.free_variables); }

 private:
  enum class Op { Not, And, Or, Implies, Exists, Forall };

  Formula gen(std::size_t depth, const std::vector<std::string>& scope) {
    std::vector<Op> ops;
    if (budget_ > 0) {
      ops.push_back(Op::And);
      if (options_.negation) ops.push_back(Op::Not);
      if (options_.disjunction) ops.push_back(Op::Or);
      if (options_.implication) ops.push_back(Op::Implies);
      if (depth > 0) {
        ops.push_back(Op::Exists);
        if (options_.universal) ops.push_back(Op::Forall);
      }
    }
    // Leaves become more likely as the budget shrinks.
    if (ops.empty() || rng_.chance(1, budget_ + 1)) return atom(scope);
    --budget_;
    switch (ops[rng_.below(ops.size())]) {
      case Op::Not:
        return Formula::negation(gen(depth, scope));
      case Op::And: {
        Formula a = gen(depth, scope);
        return Formula::conjunction(a, gen(depth, scope));
      }
      case Op::Or: {
        Formula a = gen(depth, scope);
        return Formula::disjunction(a, gen(depth, scope));
      }
      case Op::Implies: {
        Formula a = gen(depth, scope);
        return Formula::implication(a, gen(depth, scope));
      }
      case Op::Exists:
        return quantifier(depth, scope, false);
      case Op::Forall:
        return quantifier(depth, scope, true);
    }
    return atom(scope);
  }

  Formula quantifier(std::size_t depth, std::vector<std::string> scope, bool universal) {
    std::string v = "z" + std::to_string(options_.depth - depth);
    scope.push_back(v);
    Formula body = gen(depth - 1, scope);
    return universal ? Formula::forall(v, body) : Formula::exists(v, body);
  }

  Term term(const std::vector<std::string>& scope) {
    std::size_t nc = options_.constants ? lang_.constants().size() : 0;
    std::size_t pick = rng_.below(scope.size() + nc);
    if (pick < scope.size()) return Term::variable(scope[pick]);
    return Term::constant(lang_.constants()[pick - scope.size()]);
  }

  Formula atom(const std::vector<std::string>& scope) {
    std::size_t nc = options_.constants ? lang_.constants().size() : 0;
    if (scope.empty() && nc == 0) return rng_.chance(1, 2) ? Formula::verum() : Formula::falsum();
    std::size_t np = lang_.predicates().size();
    std::size_t pick = rng_.below(np + 1);
    if (pick == np) {
      Term a = term(scope);
      return Formula::equal(a, term(scope));
    }
    const auto& p = lang_.predicates()[pick];
    std::vector<Term> args;
    for (std::size_t i = 0; i < p.arity; ++i) args.push_back(term(scope));
    return Formula::atom(p.name, std::move(args));
  }

  Rng& rng_;
  const Language& lang_;
  const RandomFormulaOptions& options_;
  std::size_t budget_;
};

}  // namespace

Formula random_formula(Rng& rng, const Language& lang, const RandomFormulaOptions& options) {
  if (options.depth > kMaxRandomDepth)
    throw Error("random formula depth " + std::to_string(options.depth) + " exceeds the bound " +
                std::to_string(kMaxRandomDepth));
  return FormulaGenerator(rng, lang, options).run();
}

}  // namespace simprod
