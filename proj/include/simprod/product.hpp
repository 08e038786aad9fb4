#pragma once

// Simple products of two relational structures: the product language, the
// standard product structure, conversion of factor formulas into the product
// language, the axiom set whose models are exactly the products, and the
// decomposition of such a model back into its factors.

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "simprod/logic.hpp"
#include "simprod/structure.hpp"

namespace simprod {

enum class Factor { First = 1, Second = 2 };

inline std::size_t factor_index(Factor k) { return static_cast<std::size_t>(k); }
inline Factor other(Factor k) { return k == Factor::First ? Factor::Second : Factor::First; }

enum class PredicateTag { Factor1, Factor2, Sim1, Sim2 };

const char* tag_name(PredicateTag tag);

/// The signature of a product of two languages, with the provenance of every
/// predicate of the combined language.
class SimLanguage {
 public:
  static constexpr const char* kSim1 = "sim1";
  static constexpr const char* kSim2 = "sim2";

  const Language& base() const { return base_; }
  const Language& factor(Factor k) const { return k == Factor::First ? factor1_ : factor2_; }

  /// Name of the product constant for the factor constants (c1, c2).
  const std::string& product_constant(const std::string& c1, const std::string& c2) const;
  /// Factor constants (c1, c2) of a product constant.
  const std::pair<std::string, std::string>& constant_pair(const std::string& product_constant) const;
  /// Name in the combined language of factor k's predicate.
  const std::string& base_predicate(Factor k, const std::string& factor_predicate) const;
  /// Factor and factor-side name of a lifted predicate; nullopt for sim1/sim2.
  std::optional<std::pair<Factor, std::string>> factor_predicate(const std::string& base_predicate) const;
  PredicateTag tag(const std::string& base_predicate) const;
  static const char* sim_name(Factor k) { return k == Factor::First ? kSim1 : kSim2; }

 private:
  friend SimLanguage build_sim_language(const Language&, const Language&);

  Language base_;
  Language factor1_;
  Language factor2_;
  std::map<std::pair<std::string, std::string>, std::string> const_map_;
  std::map<std::string, std::pair<std::string, std::string>> const_pairs_;
  std::map<std::string, std::string> pred_map1_;
  std::map<std::string, std::string> pred_map2_;
  std::map<std::string, PredicateTag> tags_;
  std::map<std::string, std::pair<Factor, std::string>> pred_origin_;
};

/// Product constants are named C_<c1>_<c2>; the equivalence relations are
/// sim1 and sim2. A factor predicate whose name collides with any other
/// symbol is renamed <name>~1 or <name>~2. Throws Error when a factor has no
/// constants.
SimLanguage build_sim_language(const Language& l1, const Language& l2);

/// Row-major encoding of pairs: (a, b) -> a * n2 + b.
class ProductEncoding {
 public:
  ProductEncoding(std::size_t n1, std::size_t n2) : n1_(n1), n2_(n2) {}

  std::size_t size() const { return n1_ * n2_; }
  std::size_t size(Factor k) const { return k == Factor::First ? n1_ : n2_; }
  Element encode(Element a, Element b) const { return static_cast<Element>(a * n2_ + b); }
  std::pair<Element, Element> decode(Element e) const {
    return {static_cast<Element>(e / n2_), static_cast<Element>(e % n2_)};
  }
  Element project(Factor k, Element e) const { return k == Factor::First ? decode(e).first : decode(e).second; }
  Tuple project(Factor k, std::span<const Element> t) const;

 private:
  std::size_t n1_;
  std::size_t n2_;
};

struct ConversionOptions {
  /// Index of the opposite factor's constant that fills the auxiliary slot of
  /// a product constant when a factor constant is converted.
  std::size_t auxiliary_constant = 0;
};

/// Translates a formula over factor k's language into the combined language.
/// Equalities become sim_k atoms, atoms with constant arguments are expanded
/// through fresh existentials, and the translation commutes with every
/// connective and quantifier.
Formula standard_conversion(const Formula& f, Factor k, const SimLanguage& sl,
                            const ConversionOptions& options = {});

/// The conjunction of (sim_k x_i y_i); throws Error on length mismatch or
/// empty tuples.
Formula tuple_sim(Factor k, std::span<const std::string> xs, std::span<const std::string> ys);

/// Axioms making sim1, sim2 encode a Cartesian product: reflexivity,
/// symmetry, transitivity of each relation, then the two product axioms.
std::vector<Formula> cartesian_axioms();
/// One sentence per factor predicate: tuples equivalent under sim_k agree on it.
std::vector<Formula> congruence_axioms(const SimLanguage& sl);
/// Cartesian axioms, converted factor theories, congruence axioms.
std::vector<Formula> build_t_sim(std::span<const Formula> t1, std::span<const Formula> t2, const SimLanguage& sl);

/// The standard product structure of m1 and m2 over sl.base().
FiniteStructure product(const FiniteStructure& m1, const FiniteStructure& m2, const SimLanguage& sl);

struct Decomposition {
  FiniteStructure factor1;
  FiniteStructure factor2;
  /// sigma[x] is the encoding of ([x]_1, [x]_2) in product(factor1, factor2).
  std::vector<Element> sigma;
};

/// Splits a model of the Cartesian and congruence axioms into its quotient
/// factors. Each class is represented by its least element. Throws
/// AxiomViolation naming the failing sentence when the hypothesis fails.
Decomposition decompose(const FiniteStructure& n, const SimLanguage& sl);

}  // namespace simprod
