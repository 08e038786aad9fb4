#pragma once

// Finite relational structures and Tarski evaluation.

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "simprod/logic.hpp"

namespace simprod {

using Element = std::uint32_t;
using Tuple = std::vector<Element>;
using Assignment = std::map<std::string, Element>;

/// Largest number of cells a dense relation table may have.
inline constexpr std::size_t kMaxRelationCells = std::size_t{1} << 26;

/// An interpretation of one predicate as a dense truth table over
/// universe^arity, indexed row-major.
class Relation {
 public:
  Relation() = default;
  Relation(std::size_t universe, std::size_t arity);

  std::size_t arity() const { return arity_; }
  bool holds(std::span<const Element> tuple) const { return table_[index(tuple)] != 0; }
  void set(std::span<const Element> tuple, bool value) { table_[index(tuple)] = value ? 1 : 0; }
  std::size_t count() const;
  /// Tuples in lexicographic order.
  std::vector<Tuple> tuples() const;

  friend bool operator==(const Relation&, const Relation&) = default;

 private:
  friend class CompiledFormula;
  std::size_t index(std::span<const Element> tuple) const;

  std::size_t universe_ = 0;
  std::size_t arity_ = 0;
  std::vector<std::uint8_t> table_;
};

/// Universe {0, ..., size-1} with interpretations for every symbol of a
/// language. Immutable; build one with StructureBuilder.
class FiniteStructure {
 public:
  const std::string& name() const { return name_; }
  const Language& language() const { return lang_; }
  std::size_t size() const { return size_; }

  Element constant(std::string_view name) const;
  const std::vector<Element>& constants() const { return constants_; }
  const Relation& relation(std::string_view predicate) const;
  const std::vector<Relation>& relations() const { return relations_; }
  bool holds(std::string_view predicate, std::span<const Element> tuple) const {
    return relation(predicate).holds(tuple);
  }

  friend bool operator==(const FiniteStructure&, const FiniteStructure&) = default;

 private:
  friend class StructureBuilder;
  FiniteStructure() = default;

  std::string name_;
  Language lang_;
  std::size_t size_ = 0;
  std::vector<Element> constants_;
  std::vector<Relation> relations_;
};

class StructureBuilder {
 public:
  /// Throws Error for size 0 or when a relation would be too large.
  StructureBuilder(Language lang, std::size_t size, std::string name = "M");

  StructureBuilder& constant(std::string_view name, Element value);
  StructureBuilder& tuple(std::string_view predicate, std::span<const Element> tuple);
  StructureBuilder& tuple(std::string_view predicate, std::initializer_list<Element> tuple) {
    return this->tuple(predicate, std::span<const Element>(tuple.begin(), tuple.size()));
  }
  StructureBuilder& set(std::string_view predicate, std::span<const Element> tuple, bool value);

  /// Throws Error if some constant was never interpreted.
  FiniteStructure build() const;

 private:
  FiniteStructure s_;
  std::vector<bool> assigned_;
};

/// A formula compiled against a structure with an ordered tuple of free
/// variable slots. Evaluation is thread-safe.
class CompiledFormula {
 public:
  /// Throws Error if a free variable of `f` is not in `vars` or a symbol is
  /// not in the structure's language.
  CompiledFormula(const FiniteStructure& s, const Formula& f, std::span<const std::string> vars);

  bool operator()(std::span<const Element> values) const;

 private:
  struct Node {
    FormulaKind kind;
    // Equal/Atom arguments: slot index, or constant element when is_const.
    std::vector<std::pair<bool, Element>> args;
    const Relation* relation = nullptr;
    std::size_t slot = 0;  // bound slot of a quantifier
    std::size_t a = 0, b = 0;
  };
  bool eval(std::size_t node, std::vector<Element>& env) const;

  const FiniteStructure* s_;
  std::size_t arity_;
  std::size_t slots_ = 0;
  std::vector<Node> nodes_;
  std::size_t root_ = 0;
};

/// Tarski satisfaction. Throws Error for an unbound free variable.
bool evaluate(const FiniteStructure& s, const Formula& f, const Assignment& a);

/// Calls `visit(tuple)` for every tuple in universe^arity, lexicographically.
/// Stops early when `visit` returns false; returns false in that case.
template <typename Visit>
bool for_each_tuple(std::size_t universe, std::size_t arity, Visit&& visit) {
  Tuple t(arity, 0);
  if (universe == 0 && arity > 0) return true;
  for (;;) {
    if (!visit(static_cast<const Tuple&>(t))) return false;
    std::size_t i = arity;
    while (i > 0) {
      --i;
      if (++t[i] < universe) break;
      t[i] = 0;
      if (i == 0) return true;
    }
    if (arity == 0) return true;
  }
}

/// { e : s |= f[vars := e] } in lexicographic order.
std::vector<Tuple> definable_set(const FiniteStructure& s, const Formula& f,
                                 std::span<const std::string> vars);

struct SentenceVerdict {
  Formula sentence;
  bool holds = false;
  /// Least failing assignment of the outermost universal block.
  std::optional<Assignment> counterexample;
};

struct CheckReport {
  std::vector<SentenceVerdict> verdicts;
  bool passed() const;
  /// First failing verdict, if any.
  const SentenceVerdict* first_failure() const;
};

/// Checks closed sentences; throws Error on a sentence with free variables.
CheckReport check_sentences(const FiniteStructure& s, std::span<const Formula> sentences);

/// An isomorphism as the image of each element, or nullopt. Exhaustive
/// backtracking; throws Error when the languages differ.
std::optional<std::vector<Element>> isomorphic(const FiniteStructure& a, const FiniteStructure& b);

/// True if `map` is an isomorphism from `a` onto `b`.
bool is_isomorphism(const FiniteStructure& a, const FiniteStructure& b, std::span<const Element> map);

/// The image of `s` under the bijection `perm` (element e becomes perm[e]).
FiniteStructure permute(const FiniteStructure& s, std::span<const Element> perm);

std::string format_tuple(std::span<const Element> t);
std::string format_assignment(const Assignment& a);

}  // namespace simprod
