#pragma once

// Finite-structure checkers for combinatorial configurations: shattering and
// VC dimension, indiscernible sequences, insertion into indiscernible
// sequences, ICT patterns and TP2 arrays, plus a generator for a structure
// carrying a TP2 array of any finite shape.

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "simprod/logic.hpp"
#include "simprod/structure.hpp"

namespace simprod {

/// A formula phi(x; y) with its variables split into object and parameter
/// tuples.
struct PartitionedFormula {
  Formula formula;
  std::vector<std::string> objects;
  std::vector<std::string> params;

  /// Throws Error unless objects and params are disjoint, duplicate-free and
  /// cover the free variables of the formula.
  void validate() const;
};

/// Outcome of a checker. `witness` describes the first failure found.
struct Verdict {
  bool holds = true;
  std::string witness;

  explicit operator bool() const { return holds; }
  static Verdict pass() { return {}; }
  static Verdict fail(std::string witness) { return {false, std::move(witness)}; }
};

/// Restricts which elements may appear in object / parameter tuples.
/// Empty means the whole universe.
struct TraceDomain {
  std::vector<Element> object_elements;
  std::vector<Element> param_elements;
};

/// Object tuples in the traced space, lexicographic over the allowed elements.
std::vector<Tuple> object_space(const FiniteStructure& s, const PartitionedFormula& pf,
                                const TraceDomain& domain = {});

/// A trace is the sorted list of indices into object_space() realizing
/// phi(x; b) for one parameter tuple b.
using Trace = std::vector<std::size_t>;

/// Distinct traces over all parameter tuples.
std::set<Trace> trace_family(const FiniteStructure& s, const PartitionedFormula& pf, const TraceDomain& domain = {});

/// Number of distinct subsets of `points` cut out by `family`.
std::size_t shatter_count(const std::set<Trace>& family, std::span<const std::size_t> points);

/// Largest d such that some d object tuples are shattered by the trace family.
std::size_t vc_dim(const FiniteStructure& s, const PartitionedFormula& pf, const TraceDomain& domain = {});

/// An element tuple sequence (a_i | i < len) indexed by 0 < 1 < ... .
struct IndexedSequence {
  std::vector<Tuple> items;

  std::size_t arity() const { return items.empty() ? 0 : items.front().size(); }
  void validate(const FiniteStructure& s) const;
};

/// A formula phi(x_1, ..., x_n; p) read as a condition on n increasing
/// sequence positions. slots[j] lists the variables receiving the j-th
/// selected sequence tuple (its length must equal the sequence arity);
/// params are instantiated by elements of the parameter set.
struct SequenceFormula {
  Formula formula;
  std::vector<std::vector<std::string>> slots;
  std::vector<std::string> params;
};

/// Every formula in `formulas`, under every instantiation of its parameters by
/// elements of `params`, takes the same truth value on all strictly increasing
/// index tuples of `seq`.
Verdict check_indiscernible(const FiniteStructure& s, const IndexedSequence& seq, std::span<const Element> params,
                            std::span<const SequenceFormula> formulas);

enum class MutualParameters {
  /// Each sequence is tested over the parameter set together with the
  /// entries of all other sequences.
  Union,
  /// Each sequence is tested over the parameter set intersected with the
  /// entries of all other sequences.
  Intersection,
};

Verdict check_mutually_indiscernible(const FiniteStructure& s, std::span<const IndexedSequence> family,
                                     std::span<const Element> params, std::span<const SequenceFormula> formulas,
                                     MutualParameters mode = MutualParameters::Union);

struct InsertionResult {
  /// Whether left + right is indiscernible (the hypothesis).
  Verdict flanks;
  /// Whether left + (c) + right is indiscernible.
  Verdict inserted;
};

/// Finite stand-in for inserting c between two indiscernible flanks: the
/// verdict is on the concatenation left + (c) + right. Throws Error on empty
/// flanks or mismatched arities.
InsertionResult distal_insertion_check(const FiniteStructure& s, const IndexedSequence& left, const Tuple& c,
                                       const IndexedSequence& right, std::span<const Element> params,
                                       std::span<const SequenceFormula> formulas);

struct IctInstance {
  /// phi(x; y) and psi(x; y), each with a single object variable.
  PartitionedFormula phi;
  PartitionedFormula psi;
  std::vector<Tuple> a;
  std::vector<Tuple> b;
};

/// For every (i, j) some x satisfies
/// phi(x, a_i) & psi(x, b_j) & AND_{l != i} not phi(x, a_l) & AND_{l != j} not psi(x, b_l).
Verdict check_ict_pattern(const FiniteStructure& s, const IctInstance& inst);

/// cells[t][i] is the parameter tuple in row t, column i.
struct Tp2Array {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t k = 2;
  std::vector<std::vector<Tuple>> cells;

  void validate(const FiniteStructure& s, const PartitionedFormula& pf) const;
};

/// Every path through the rows is consistent and every k cells of a row are
/// jointly inconsistent.
Verdict check_tp2_array(const FiniteStructure& s, const PartitionedFormula& pf, const Tp2Array& arr);

/// Satisfiability of each single cell, in row-major order.
std::vector<std::vector<bool>> cell_satisfiable(const FiniteStructure& s, const PartitionedFormula& pf,
                                                const Tp2Array& arr);

/// Upper bound on the universe of a generated witness.
inline constexpr std::size_t kMaxWitnessUniverse = 2048;

struct Tp2Witness {
  FiniteStructure structure;
  PartitionedFormula formula;
  Tp2Array array;
};

/// Universe: m^n path indices (lexicographic rank of eta: {1..n} -> {1..m})
/// followed by n*m block elements, the element m^n + j - 1 standing for the
/// integer j. P(i, e) holds iff e stands for some (t-1)m + eta_i(t).
/// Throws Error if n or m is 0 or the universe would exceed
/// kMaxWitnessUniverse.
Tp2Witness build_tp2_witness(std::size_t n, std::size_t m);

/// The map of lexicographic rank `rank` in {1..n} -> {1..m}, as values 1..m.
std::vector<std::size_t> path_of_rank(std::size_t rank, std::size_t n, std::size_t m);
/// X_eta = {(t-1)m + eta(t) : 1 <= t <= n}, as integers.
std::vector<std::size_t> witness_block_set(std::span<const std::size_t> eta, std::size_t m);

}  // namespace simprod
