#pragma once

// Rewriting formulas of a product language into semi-simple form: a finite
// disjunction of conjunctions (psi1~ and psi2~) of converted factor formulas.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "simprod/logic.hpp"
#include "simprod/product.hpp"
#include "simprod/structure.hpp"

namespace simprod {

/// Negation normal form: negations only on atoms, no implications. Forall is
/// kept as a quantifier.
Formula to_nnf(const Formula& f);

/// psi1 over the first factor language, psi2 over the second.
struct SimpleFormula {
  Formula psi1;
  Formula psi2;

  friend bool operator==(const SimpleFormula&, const SimpleFormula&) = default;
};

struct SemiSimpleFormula {
  /// Empty means false.
  std::vector<SimpleFormula> disjuncts;
  std::vector<std::string> free_vars;
};

struct SimplifyOptions {
  /// Drop syntactically repeated disjuncts.
  bool dedupe = false;
};

/// Rewrites `f` (over sl.base()) into an equivalent semi-simple formula.
/// Throws UnknownSymbolError for symbols outside the product language.
SemiSimpleFormula semi_simplify(const Formula& f, const SimLanguage& sl, const SimplifyOptions& options = {});

/// Disjunction of the converted disjuncts; false when empty.
Formula realize(const SemiSimpleFormula& ssf, const SimLanguage& sl);

/// Removes syntactically identical disjuncts, keeping first occurrences.
SemiSimpleFormula dedupe_disjuncts(SemiSimpleFormula ssf);

struct EquivalenceResult {
  bool equivalent = true;
  /// First assignment (lexicographic over the variable tuple) where f and g differ.
  std::optional<Assignment> counterexample;
  explicit operator bool() const { return equivalent; }
};

/// Compares f and g under every assignment of their free variables. Throws
/// Error when the free variable sets differ.
EquivalenceResult check_equivalent(const FiniteStructure& s, const Formula& f, const Formula& g);
/// Same, over an explicit variable tuple covering the free variables of both.
EquivalenceResult check_equivalent(const FiniteStructure& s, const Formula& f, const Formula& g,
                                   std::span<const std::string> vars);

}  // namespace simprod
