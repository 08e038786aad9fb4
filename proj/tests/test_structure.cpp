#include <doctest.h>

#include "oracles.hpp"
#include "simprod/error.hpp"
#include "simprod/product.hpp"
#include "simprod/random.hpp"
#include "simprod/structure.hpp"

using namespace simprod;

namespace {

Language order_language() { return Language("Ord", {}, {{"Lt", 2}}); }

FiniteStructure chain(std::size_t n) {
  StructureBuilder b(order_language(), n, "chain");
  for (Element i = 0; i < n; ++i)
    for (Element j = i + 1; j < n; ++j) b.tuple("Lt", {i, j});
  return b.build();
}

// Two equivalence relations on a universe, both equality.
FiniteStructure diagonal_sims(std::size_t n) {
  Language l("D", {}, {{"sim1", 2}, {"sim2", 2}});
  StructureBuilder b(l, n, "diag");
  for (Element i = 0; i < n; ++i) {
    b.tuple("sim1", {i, i});
    b.tuple("sim2", {i, i});
  }
  return b.build();
}

}  // namespace

TEST_SUITE("structure") {
  TEST_CASE("builder validation") {
    CHECK_THROWS_AS(StructureBuilder(order_language(), 0), Error);
    Language l("L", {"a"}, {{"P", 1}});
    StructureBuilder b(l, 2);
    CHECK_THROWS_AS(b.build(), Error);
    CHECK_THROWS_AS(b.constant("a", 2), Error);
    CHECK_THROWS_AS(b.tuple("P", {0, 1}), ArityError);
    CHECK_THROWS_AS(b.tuple("Q", {0}), UnknownSymbolError);
  }

  TEST_CASE("evaluate on a 2-chain") {
    FiniteStructure s = chain(2);
    Language l = order_language();
    CHECK(evaluate(s, parse_formula("(Lt x y)", l), {{"x", 0}, {"y", 1}}));
    CHECK_FALSE(evaluate(s, parse_formula("(exists y (Lt x y))", l), {{"x", 1}}));
    for (Element e = 0; e < 2; ++e) CHECK(evaluate(s, parse_formula("(= x x)", l), {{"x", e}}));
    CHECK_THROWS_AS(evaluate(s, parse_formula("(Lt x y)", l), {{"x", 0}}), Error);
  }

  TEST_CASE("definable sets") {
    FiniteStructure s3 = chain(3);
    Language l = order_language();
    CHECK(definable_set(s3, parse_formula("(= x y)", l), std::vector<std::string>{"x", "y"}) ==
          std::vector<Tuple>{{0, 0}, {1, 1}, {2, 2}});
    CHECK(definable_set(s3, Formula::falsum(), std::vector<std::string>{"x"}).empty());
    CHECK(definable_set(s3, parse_formula("(exists y (Lt x y))", l), std::vector<std::string>{"x"}) ==
          std::vector<Tuple>{{0}, {1}});
  }

  TEST_CASE("check_sentences") {
    CHECK(check_sentences(chain(2), {}).passed());
    // sim1 = sim2 = equality breaks the axiom that every sim1-class meets every sim2-class.
    CheckReport report = check_sentences(diagonal_sims(2), cartesian_axioms());
    REQUIRE_FALSE(report.passed());
    const SentenceVerdict& failure = *report.first_failure();
    CHECK(failure.sentence == cartesian_axioms().back());
    REQUIRE(failure.counterexample);
    CHECK(*failure.counterexample == Assignment{{"x", 0}, {"y", 1}});
    for (std::size_t i = 0; i + 1 < report.verdicts.size(); ++i) CHECK(report.verdicts[i].holds);
    CHECK_THROWS_AS(check_sentences(chain(2), std::vector<Formula>{parse_formula("(Lt x y)", order_language())}),
                    Error);
  }

  TEST_CASE("isomorphism search") {
    FiniteStructure s = chain(2);
    auto id = isomorphic(s, s);
    REQUIRE(id);
    CHECK(*id == std::vector<Element>{0, 1});
    StructureBuilder b(order_language(), 2, "reversed");
    b.tuple("Lt", {1, 0});
    auto swap = isomorphic(s, b.build());
    REQUIRE(swap);
    CHECK(*swap == std::vector<Element>{1, 0});
    CHECK_FALSE(isomorphic(chain(2), chain(3)));
  }

  TEST_CASE("compiled evaluation agrees with the recursive oracle") {
    Rng rng(5);
    for (int i = 0; i < 150; ++i) {
      Language l = random_language(rng, {"L", 0, 2, 1, 2, 2});
      FiniteStructure s = random_structure(rng, l, 1, 4);
      RandomFormulaOptions fo;
      fo.depth = rng.below(4);
      Formula f = random_formula(rng, l, fo);
      std::vector<std::string> vars{"x", "y"};
      auto expected = oracle::satisfying(s, f, vars);
      CHECK(definable_set(s, f, vars) == expected);
      // Connectives act as set operations on definable sets.
      auto negated = definable_set(s, Formula::negation(f), vars);
      CHECK(expected.size() + negated.size() == s.size() * s.size());
    }
  }

  TEST_CASE("isomorphism search agrees with permutation enumeration") {
    Rng rng(9);
    for (int i = 0; i < 60; ++i) {
      Language l = random_language(rng, {"L", 0, 2, 1, 2, 2});
      FiniteStructure a = random_structure(rng, l, 1, 5);
      FiniteStructure b = rng.chance(1, 2) ? permute(a, rng.permutation(a.size()))
                                           : random_structure(rng, l, a.size(), a.size());
      auto map = isomorphic(a, b);
      CHECK(map.has_value() == oracle::isomorphic(a, b));
      if (map) CHECK(is_isomorphism(a, b, *map));
    }
  }

  TEST_CASE("formatting") {
    CHECK(format_tuple(Tuple{0, 1}) == "(0,1)");
    CHECK(format_assignment({{"x", 0}, {"y", 1}}) == "{x:0, y:1}");
  }
}
