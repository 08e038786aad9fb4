#pragma once

// Seeded generators for small languages, structures and formulas. Output
// depends only on the seed: draws never go through std distributions, whose
// results vary between standard library implementations.

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "simprod/logic.hpp"
#include "simprod/structure.hpp"

namespace simprod {

inline constexpr std::size_t kMaxRandomStructureSize = 6;
inline constexpr std::size_t kMaxRandomDepth = 3;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, n). n must be positive.
  std::size_t below(std::size_t n);
  /// Uniform in [lo, hi].
  std::size_t between(std::size_t lo, std::size_t hi) { return lo + below(hi - lo + 1); }
  /// True with probability num/den.
  bool chance(std::size_t num, std::size_t den) { return below(den) < num; }
  /// Uniform random permutation of 0..n-1.
  std::vector<Element> permutation(std::size_t n);

 private:
  std::mt19937_64 engine_;
};

struct RandomLanguageOptions {
  std::string name = "L";
  std::size_t min_constants = 0;
  std::size_t max_constants = 1;
  std::size_t min_predicates = 1;
  std::size_t max_predicates = 2;
  std::size_t max_arity = 2;
  std::string constant_prefix = "c";
  std::string predicate_prefix = "R";
};

Language random_language(Rng& rng, const RandomLanguageOptions& options = {});

/// Universe size uniform in [min_size, max_size]; every tuple holds with
/// probability 1/2. Throws Error if max_size exceeds kMaxRandomStructureSize.
FiniteStructure random_structure(Rng& rng, const Language& lang, std::size_t min_size, std::size_t max_size,
                                 std::string name = "M");

struct RandomFormulaOptions {
  /// Maximum quantifier depth; 0 yields quantifier-free formulas.
  std::size_t depth = 2;
  /// Maximum number of connectives and quantifiers.
  std::size_t max_operators = 5;
  std::vector<std::string> free_variables = {"x", "y"};
  bool constants = true;
  bool negation = true;
  bool disjunction = true;
  bool implication = true;
  bool universal = true;
};

/// Free variables are drawn from options.free_variables; bound variables are
/// named z0, z1, ... Throws Error if depth exceeds kMaxRandomDepth.
Formula random_formula(Rng& rng, const Language& lang, const RandomFormulaOptions& options = {});

}  // namespace simprod
