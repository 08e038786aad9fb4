#pragma once

// First-order formulas over relational languages with constants.

#include <cstddef>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace simprod {

struct PredicateSymbol {
  std::string name;
  std::size_t arity = 1;

  friend bool operator==(const PredicateSymbol&, const PredicateSymbol&) = default;
};

/// A relational signature. Declaration order of constants and predicates is
/// significant: it resolves every "pick some constant" choice.
class Language {
 public:
  Language() = default;
  /// Throws Error if a name is malformed, reserved, or declared twice, or if
  /// a predicate has arity 0.
  Language(std::string name, std::vector<std::string> constants,
           std::vector<PredicateSymbol> predicates);

  const std::string& name() const { return name_; }
  const std::vector<std::string>& constants() const { return constants_; }
  const std::vector<PredicateSymbol>& predicates() const { return predicates_; }

  std::optional<std::size_t> constant_index(std::string_view name) const;
  std::optional<std::size_t> predicate_index(std::string_view name) const;
  bool has_constant(std::string_view name) const { return constant_index(name).has_value(); }
  bool has_predicate(std::string_view name) const { return predicate_index(name).has_value(); }
  /// Arity of a declared predicate; throws UnknownSymbolError otherwise.
  std::size_t arity(std::string_view predicate) const;

  friend bool operator==(const Language&, const Language&) = default;

 private:
  std::string name_;
  std::vector<std::string> constants_;
  std::vector<PredicateSymbol> predicates_;
};

/// True for names matching [A-Za-z_][A-Za-z0-9_~]* that are not keywords.
bool is_valid_symbol_name(std::string_view name);
bool is_keyword(std::string_view name);

struct Term {
  enum class Kind { Variable, Constant };

  Kind kind = Kind::Variable;
  std::string name;

  static Term variable(std::string name) { return {Kind::Variable, std::move(name)}; }
  static Term constant(std::string name) { return {Kind::Constant, std::move(name)}; }
  bool is_variable() const { return kind == Kind::Variable; }
  bool is_constant() const { return kind == Kind::Constant; }

  friend bool operator==(const Term&, const Term&) = default;
  friend auto operator<=>(const Term&, const Term&) = default;
};

enum class FormulaKind { Verum, Falsum, Equal, Atom, Not, And, Or, Implies, Exists, Forall };

/// Immutable formula AST. Copies share structure.
class Formula {
 public:
  /// Verum.
  Formula();

  static Formula verum();
  static Formula falsum();
  static Formula equal(Term lhs, Term rhs);
  static Formula atom(std::string predicate, std::vector<Term> args);
  static Formula negation(Formula operand);
  static Formula conjunction(Formula lhs, Formula rhs);
  static Formula disjunction(Formula lhs, Formula rhs);
  static Formula implication(Formula lhs, Formula rhs);
  static Formula exists(std::string variable, Formula body);
  static Formula forall(std::string variable, Formula body);

  FormulaKind kind() const;
  bool is(FormulaKind k) const { return kind() == k; }
  bool is_atomic() const;
  bool is_binary() const;
  bool is_quantifier() const;

  /// Arguments of Equal (two terms) and Atom.
  const std::vector<Term>& terms() const;
  /// Predicate name of an Atom.
  const std::string& predicate() const;
  /// Bound variable of a quantifier.
  const std::string& variable() const;
  /// Operand of Not, body of a quantifier.
  const Formula& body() const;
  const Formula& lhs() const;
  const Formula& rhs() const;

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// Folding helpers. Lists are folded to the right: (and a (and b c)).
Formula conjoin(std::span<const Formula> parts);
Formula disjoin(std::span<const Formula> parts);
Formula biconditional(const Formula& a, const Formula& b);
Formula exists_all(std::span<const std::string> variables, Formula body);
Formula forall_all(std::span<const std::string> variables, Formula body);

/// Parses one formula; the whole input must be consumed.
Formula parse_formula(std::string_view text, const Language& lang);
/// Parses a whitespace-separated sequence of formulas.
std::vector<Formula> parse_formulas(std::string_view text, const Language& lang);
std::string render_formula(const Formula& f);

/// Throws UnknownSymbolError / ArityError if `f` is not a formula over `lang`.
void check_formula(const Formula& f, const Language& lang);

std::vector<std::string> free_variables(const Formula& f);
bool is_sentence(const Formula& f);
std::size_t quantifier_depth(const Formula& f);
/// Number of AST nodes.
std::size_t formula_size(const Formula& f);
/// Every variable and constant name occurring anywhere in `f`.
std::set<std::string> symbol_names(const Formula& f);

/// Alpha-renames every binder to a fresh name v0, v1, ... (pre-order), skipping
/// names in `reserved` and names already occurring in `f`. Free variables are
/// untouched.
Formula rename_bound(const Formula& f, const std::set<std::string>& reserved);

/// Deterministic source of fresh variable names v0, v1, ... avoiding a set.
class FreshNames {
 public:
  explicit FreshNames(std::set<std::string> avoid, std::string prefix = "v")
      : avoid_(std::move(avoid)), prefix_(std::move(prefix)) {}
  std::string next();
  void avoid(const std::string& name) { avoid_.insert(name); }

 private:
  std::set<std::string> avoid_;
  std::string prefix_;
  std::size_t counter_ = 0;
};

}  // namespace simprod
