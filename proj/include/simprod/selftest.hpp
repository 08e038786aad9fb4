#pragma once

// Randomized property checks over small products, and the report driver
// behind the CLI's selftest command.

#include <cstddef>
#include <cstdint>
#include <string>

#include "simprod/dividing_lines.hpp"
#include "simprod/product.hpp"
#include "simprod/random.hpp"

namespace simprod {

struct FactorPairOptions {
  std::size_t max_size = 3;
  std::size_t min_constants = 1;
  std::size_t max_constants = 1;
  std::size_t max_predicates = 2;
  std::size_t max_arity = 2;
  /// Give both factors the same predicate names, forcing renaming.
  bool shared_names = false;
};

/// Two random factors and their standard product.
struct FactorPair {
  SimLanguage sl;
  FiniteStructure m1;
  FiniteStructure m2;
  FiniteStructure n;

  const FiniteStructure& factor(Factor k) const { return k == Factor::First ? m1 : m2; }
};

FactorPair random_factor_pair(Rng& rng, const FactorPairOptions& options = {});

/// The product satisfies T_sim built from empty factor theories.
Verdict check_tsim(const FactorPair& p);
/// phi on factor k agrees with its conversion on the product at every tuple
/// of product elements.
Verdict check_transfer(const FactorPair& p, const Formula& phi, Factor k, const ConversionOptions& options = {});
/// f and realize(semi_simplify(f)) agree on the product.
Verdict check_normal_form(const FactorPair& p, const Formula& f);
/// Decomposing the product with its universe permuted by `perm` and
/// multiplying back gives a structure isomorphic to the permuted product.
Verdict check_roundtrip(const FactorPair& p, std::span<const Element> perm);

struct SelftestResult {
  std::string report;
  std::size_t checks = 0;
  std::size_t failures = 0;
  bool passed() const { return failures == 0; }
};

/// Runs every property on `cases` seeded cases. The report depends only on
/// seed and cases.
SelftestResult run_selftest(std::uint64_t seed, std::size_t cases);

}  // namespace simprod
