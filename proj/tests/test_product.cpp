#include <doctest.h>

#include "oracles.hpp"
#include "simprod/error.hpp"
#include "simprod/product.hpp"
#include "simprod/selftest.hpp"

using namespace simprod;

namespace {

Language lang1() { return Language("L1", {"a"}, {{"R", 2}}); }
Language lang2() { return Language("L2", {"b", "c"}, {{"S", 1}}); }

FiniteStructure m1_with_r01(std::size_t n) {
  StructureBuilder b(lang1(), n, "M1");
  b.constant("a", 0).tuple("R", {0, 1});
  return b.build();
}

FiniteStructure m2_plain(std::size_t n) {
  StructureBuilder b(lang2(), n, "M2");
  b.constant("b", 0).constant("c", static_cast<Element>(n - 1)).tuple("S", {0});
  return b.build();
}

std::size_t count_pairs(const FiniteStructure& s, const std::string& pred) { return s.relation(pred).count(); }

}  // namespace

TEST_SUITE("product") {
  TEST_CASE("product language") {
    SimLanguage sl = build_sim_language(lang1(), lang2());
    CHECK(sl.base().constants() == std::vector<std::string>{"C_a_b", "C_a_c"});
    REQUIRE(sl.base().predicates().size() == 4);
    std::vector<std::string> names;
    for (const auto& p : sl.base().predicates()) names.push_back(p.name);
    CHECK(names == std::vector<std::string>{"R", "S", "sim1", "sim2"});
    CHECK(sl.tag("R") == PredicateTag::Factor1);
    CHECK(sl.tag("sim2") == PredicateTag::Sim2);
    CHECK(sl.constant_pair("C_a_c") == std::pair<std::string, std::string>{"a", "c"});
  }

  TEST_CASE("colliding predicate names are distinguished") {
    Language a("A", {"a"}, {{"P", 1}});
    Language b("B", {"b"}, {{"P", 2}});
    SimLanguage sl = build_sim_language(a, b);
    const std::string& p1 = sl.base_predicate(Factor::First, "P");
    const std::string& p2 = sl.base_predicate(Factor::Second, "P");
    CHECK(p1 != p2);
    CHECK(sl.base().arity(p1) == 1);
    CHECK(sl.base().arity(p2) == 2);
    CHECK(sl.factor_predicate(p2) == std::pair<Factor, std::string>{Factor::Second, "P"});
  }

  TEST_CASE("factors need constants") {
    CHECK_THROWS_AS(build_sim_language(Language("A", {}, {{"P", 1}}), lang2()), Error);
  }

  TEST_CASE("standard conversion examples") {
    SimLanguage sl = build_sim_language(lang1(), lang2());
    auto conv = [&](const std::string& text, Factor k = Factor::First) {
      return render_formula(standard_conversion(parse_formula(text, sl.factor(k)), k, sl));
    };
    CHECK(conv("(= x y)") == "(sim1 x y)");
    CHECK(conv("(= x a)") == "(sim1 x C_a_b)");
    CHECK(conv("(R x a)") == "(exists v0 (exists v1 (and (R v0 v1) (and (sim1 x v0) (sim1 v1 C_a_b)))))");
    CHECK(conv("(R x y)") == "(R x y)");
    CHECK(conv("(= b c)", Factor::Second) == "(sim2 C_a_b C_a_c)");
    CHECK(conv("(not (exists y (S y)))", Factor::Second) == "(not (exists y (S y)))");
    ConversionOptions second_aux{1};
    CHECK(render_formula(standard_conversion(parse_formula("(= x a)", sl.factor(Factor::First)), Factor::First, sl,
                                             second_aux)) == "(sim1 x C_a_c)");
    CHECK_THROWS_AS(standard_conversion(parse_formula("(S x)", sl.factor(Factor::Second)), Factor::First, sl),
                    Error);
  }

  TEST_CASE("tuple_sim") {
    CHECK(render_formula(tuple_sim(Factor::First, std::vector<std::string>{"x"}, std::vector<std::string>{"y"})) ==
          "(sim1 x y)");
    CHECK(render_formula(tuple_sim(Factor::Second, std::vector<std::string>{"x1", "x2"},
                                   std::vector<std::string>{"y1", "y2"})) == "(and (sim2 x1 y1) (sim2 x2 y2))");
    CHECK_THROWS_AS(tuple_sim(Factor::First, std::vector<std::string>{"x"}, std::vector<std::string>{"y", "z"}),
                    Error);
  }

  TEST_CASE("T_sim contents") {
    SimLanguage sl = build_sim_language(lang1(), lang2());
    CHECK(build_t_sim({}, {}, sl).size() == 10);
    std::vector<Formula> t1{parse_formula("(exists x (R x x))", lang1())};
    auto t = build_t_sim(t1, {}, sl);
    CHECK(t.size() == 11);
    Formula converted = standard_conversion(t1[0], Factor::First, sl);
    CHECK(std::find(t.begin(), t.end(), converted) != t.end());
    std::vector<Formula> open{parse_formula("(R x x)", lang1())};
    CHECK_THROWS_AS(build_t_sim(open, {}, sl), Error);
  }

  TEST_CASE("product sizes and relation counts") {
    SimLanguage sl = build_sim_language(lang1(), lang2());
    FiniteStructure n = product(m1_with_r01(2), m2_plain(3), sl);
    CHECK(n.size() == 6);
    // Pairs of product elements with equal first coordinates, enumerated directly.
    std::size_t expected = 0;
    for (Element a1 = 0; a1 < 2; ++a1)
      for (Element b1 = 0; b1 < 3; ++b1)
        for (Element a2 = 0; a2 < 2; ++a2)
          for (Element b2 = 0; b2 < 3; ++b2) expected += a1 == a2;
    CHECK(expected == 18);
    CHECK(count_pairs(n, "sim1") == expected);
    // R = {(0,1)} lifts to every pair of second coordinates.
    CHECK(count_pairs(product(m1_with_r01(2), m2_plain(2), sl), "R") == 4);
    CHECK(count_pairs(product(m1_with_r01(2), m2_plain(4), sl), "R") == 16);
    CHECK(n.constant("C_a_c") == ProductEncoding(2, 3).encode(0, 2));
  }

  TEST_CASE("product matches the coordinatewise definition") {
    Rng rng(21);
    for (int i = 0; i < 40; ++i) {
      FactorPair p = random_factor_pair(rng, {4, 1, 2, 2, 2, rng.chance(1, 2)});
      ProductEncoding enc(p.m1.size(), p.m2.size());
      for (const auto& pred : p.sl.base().predicates()) {
        for (const auto& t : oracle::all_tuples(p.n.size(), pred.arity)) {
          bool expected;
          if (pred.name == "sim1" || pred.name == "sim2") {
            Factor k = pred.name == "sim1" ? Factor::First : Factor::Second;
            expected = enc.project(k, t[0]) == enc.project(k, t[1]);
          } else {
            auto [k, name] = *p.sl.factor_predicate(pred.name);
            expected = p.factor(k).holds(name, enc.project(k, t));
          }
          CHECK(p.n.holds(pred.name, t) == expected);
        }
      }
    }
  }

  TEST_CASE("T_sim holds on products") {
    Rng rng(22);
    for (int i = 0; i < 30; ++i) CHECK(check_tsim(random_factor_pair(rng, {3, 1, 2, 2, 2, false})));
  }

  TEST_CASE("satisfaction transfers through the conversion") {
    Rng rng(23);
    for (int i = 0; i < 60; ++i) {
      FactorPair p = random_factor_pair(rng, {3, 1, 2, 2, 2, rng.chance(1, 3)});
      Factor k = rng.chance(1, 2) ? Factor::First : Factor::Second;
      RandomFormulaOptions fo;
      fo.depth = rng.below(3);
      Formula phi = random_formula(rng, p.sl.factor(k), fo);
      Formula converted = standard_conversion(phi, k, p.sl);
      ProductEncoding enc(p.m1.size(), p.m2.size());
      // Reference: recursive evaluation on both sides.
      for (const auto& t : oracle::all_tuples(p.n.size(), 2)) {
        oracle::Env on_product{{"x", t[0]}, {"y", t[1]}};
        oracle::Env on_factor{{"x", enc.project(k, t[0])}, {"y", enc.project(k, t[1])}};
        CHECK(oracle::holds(p.n, converted, on_product) == oracle::holds(p.factor(k), phi, on_factor));
      }
    }
  }

  TEST_CASE("the auxiliary constant does not change definable sets") {
    Rng rng(24);
    for (int i = 0; i < 40; ++i) {
      FactorPair p = random_factor_pair(rng, {3, 2, 2, 2, 2, false});
      Factor k = rng.chance(1, 2) ? Factor::First : Factor::Second;
      std::size_t others = p.sl.factor(other(k)).constants().size();
      Formula phi = random_formula(rng, p.sl.factor(k));
      std::vector<std::string> vars{"x", "y"};
      auto reference = oracle::satisfying(p.n, standard_conversion(phi, k, p.sl), vars);
      for (std::size_t aux = 1; aux < others; ++aux)
        CHECK(oracle::satisfying(p.n, standard_conversion(phi, k, p.sl, {aux}), vars) == reference);
    }
  }

  TEST_CASE("decompose recovers the factors") {
    SimLanguage sl = build_sim_language(lang1(), lang2());
    FiniteStructure m1 = m1_with_r01(2), m2 = m2_plain(3);
    FiniteStructure n = product(m1, m2, sl);
    Decomposition d = decompose(n, sl);
    CHECK(oracle::isomorphic(d.factor1, m1));
    CHECK(oracle::isomorphic(d.factor2, m2));
    CHECK(d.sigma == std::vector<Element>{0, 1, 2, 3, 4, 5});

    Rng rng(25);
    for (int i = 0; i < 25; ++i) {
      FactorPair p = random_factor_pair(rng, {3, 1, 2, 2, 2, false});
      FiniteStructure permuted = permute(p.n, rng.permutation(p.n.size()));
      Decomposition e = decompose(permuted, p.sl);
      CHECK(oracle::isomorphic(e.factor1, p.m1));
      CHECK(oracle::isomorphic(e.factor2, p.m2));
      FiniteStructure back = product(e.factor1, e.factor2, p.sl);
      CHECK(is_isomorphism(back, permuted, [&] {
        // sigma maps input elements to product elements; invert it.
        std::vector<Element> inv(e.sigma.size());
        for (Element x = 0; x < e.sigma.size(); ++x) inv[e.sigma[x]] = x;
        return inv;
      }()));
    }
  }

  TEST_CASE("decompose reports violated hypotheses") {
    SimLanguage sl = build_sim_language(Language("A", {"a"}, {{"P", 1}}), Language("B", {"b"}, {{"Q", 1}}));
    auto build = [&](auto&& fill) {
      StructureBuilder b(sl.base(), 2);
      b.constant("C_a_b", 0);
      fill(b);
      return b.build();
    };
    // sim1 = sim2 = equality on two points.
    FiniteStructure diag = build([](StructureBuilder& b) {
      for (Element i = 0; i < 2; ++i) b.tuple("sim1", {i, i}).tuple("sim2", {i, i});
    });
    try {
      decompose(diag, sl);
      FAIL("expected an axiom violation");
    } catch (const AxiomViolation& v) {
      CHECK(v.axiom() == "every sim1-class meets every sim2-class");
    }
    // One sim1 class, two sim2 classes, P not constant on a sim1 class.
    FiniteStructure bad_p = build([](StructureBuilder& b) {
      for (Element i = 0; i < 2; ++i)
        for (Element j = 0; j < 2; ++j) b.tuple("sim1", {i, j});
      for (Element i = 0; i < 2; ++i) b.tuple("sim2", {i, i});
      b.tuple("P", {0});
    });
    try {
      decompose(bad_p, sl);
      FAIL("expected an axiom violation");
    } catch (const AxiomViolation& v) {
      CHECK(v.axiom() == "congruence of P");
    }
  }

  TEST_CASE("decompose checks that product constants agree on factor constants") {
    SimLanguage sl = build_sim_language(Language("A", {"a"}, {{"P", 1}}), Language("B", {"b", "c"}, {{"Q", 1}}));
    FiniteStructure m1 = [&] {
      StructureBuilder b(sl.factor(Factor::First), 2);
      b.constant("a", 0);
      return b.build();
    }();
    FiniteStructure m2 = [&] {
      StructureBuilder b(sl.factor(Factor::Second), 2);
      b.constant("b", 0).constant("c", 1);
      return b.build();
    }();
    FiniteStructure n = product(m1, m2, sl);
    // Move C_a_c into the other sim1 class: T_sim still holds but no factor
    // interpretation of a matches both product constants.
    StructureBuilder b(sl.base(), n.size());
    for (const auto& p : sl.base().predicates())
      for (const auto& t : n.relation(p.name).tuples()) b.tuple(p.name, t);
    b.constant("C_a_b", n.constant("C_a_b"));
    b.constant("C_a_c", ProductEncoding(2, 2).encode(1, 1));
    FiniteStructure skewed = b.build();
    CHECK(check_sentences(skewed, build_t_sim({}, {}, sl)).passed());
    CHECK_THROWS_AS(decompose(skewed, sl), AxiomViolation);
  }
}
