#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "simprod/error.hpp"
#include "simprod/random.hpp"

using namespace simprod;

TEST_SUITE("random") {
  TEST_CASE("same seed, same output") {
    for (std::uint64_t seed : {0ull, 1ull, 99ull}) {
      Rng a(seed), b(seed);
      Language la = random_language(a), lb = random_language(b);
      CHECK(la == lb);
      FiniteStructure sa = random_structure(a, la, 1, 5), sb = random_structure(b, lb, 1, 5);
      CHECK(sa == sb);
      CHECK(random_formula(a, la) == random_formula(b, lb));
    }
  }

  TEST_CASE("below stays in range and hits every value") {
    Rng rng(5);
    std::vector<int> seen(7, 0);
    for (int i = 0; i < 700; ++i) {
      std::size_t v = rng.below(7);
      REQUIRE(v < 7);
      ++seen[v];
    }
    for (int c : seen) CHECK(c > 0);
    CHECK(rng.between(3, 3) == 3);
  }

  TEST_CASE("permutations") {
    Rng rng(11);
    for (std::size_t n : {0u, 1u, 5u, 12u}) {
      auto p = rng.permutation(n);
      std::vector<Element> sorted = p;
      std::sort(sorted.begin(), sorted.end());
      std::vector<Element> id(n);
      std::iota(id.begin(), id.end(), Element{0});
      CHECK(sorted == id);
    }
  }

  TEST_CASE("bounds") {
    Rng rng(1);
    Language l = random_language(rng);
    CHECK_THROWS_AS(random_structure(rng, l, 1, kMaxRandomStructureSize + 1), Error);
    RandomFormulaOptions fo;
    fo.depth = kMaxRandomDepth + 1;
    CHECK_THROWS_AS(random_formula(rng, l, fo), Error);
  }

  TEST_CASE("generated formulas respect their options") {
    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
      RandomLanguageOptions lo;
      lo.max_constants = 2;
      Language l = random_language(rng, lo);
      CHECK(l.constants().size() <= 2);
      CHECK(!l.predicates().empty());
      for (const auto& p : l.predicates()) CHECK(p.arity <= 2);
      RandomFormulaOptions fo;
      fo.depth = rng.below(kMaxRandomDepth + 1);
      Formula f = random_formula(rng, l, fo);
      CHECK(quantifier_depth(f) <= fo.depth);
      for (const auto& v : free_variables(f)) CHECK((v == "x" || v == "y"));
      // Must parse back in the language it was drawn from.
      CHECK(parse_formula(render_formula(f), l) == f);
    }
  }

  TEST_CASE("structures stay inside the size range") {
    Rng rng(8);
    Language l = random_language(rng);
    for (int i = 0; i < 50; ++i) {
      FiniteStructure s = random_structure(rng, l, 2, 4);
      CHECK(s.size() >= 2);
      CHECK(s.size() <= 4);
    }
  }
}
