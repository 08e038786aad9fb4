#include <doctest.h>

#include "oracles.hpp"
#include "simprod/error.hpp"
#include "simprod/normal_form.hpp"
#include "simprod/selftest.hpp"

using namespace simprod;

namespace {

SimLanguage sim_rs() {
  return build_sim_language(Language("L1", {"a"}, {{"R", 2}}), Language("L2", {"b"}, {{"S", 1}}));
}

std::string show(const SemiSimpleFormula& ssf) {
  std::string out;
  for (const auto& d : ssf.disjuncts) out += "[" + render_formula(d.psi1) + " | " + render_formula(d.psi2) + "]";
  return out;
}

}  // namespace

TEST_SUITE("normal_form") {
  TEST_CASE("negation normal form") {
    Language l("L", {}, {{"A", 1}, {"B", 1}});
    auto nnf = [&](const std::string& text) { return render_formula(to_nnf(parse_formula(text, l))); };
    CHECK(nnf("(not (and (A x) (B x)))") == "(or (not (A x)) (not (B x)))");
    CHECK(nnf("(implies (A x) (B x))") == "(or (not (A x)) (B x))");
    CHECK(nnf("(not (exists x (A x)))") == "(forall x (not (A x)))");
    CHECK(nnf("(not (not (A x)))") == "(A x)");
    CHECK(nnf("(not true)") == "false");
  }

  TEST_CASE("semi-simple forms of basic formulas") {
    SimLanguage sl = sim_rs();
    auto simp = [&](const std::string& text) { return show(semi_simplify(parse_formula(text, sl.base()), sl)); };
    CHECK(simp("(= x y)") == "[(= x y) | (= x y)]");
    CHECK(simp("(exists y (and (R x y) (S y)))") == "[(exists y (R x y)) | (exists y (S y))]");
    CHECK(simp("(not (sim1 x y))") == "[(not (= x y)) | true]");
    CHECK(simp("(sim2 x y)") == "[true | (= x y)]");
    CHECK(simp("(or (S x) (R x y))") == "[true | (S x)][(R x y) | true]");
    CHECK(simp("(R x C_a_b)") == "[(R x a) | true]");
    CHECK(simp("false") == "");
    CHECK_THROWS_AS(semi_simplify(parse_formula("(P x)", Language("X", {}, {{"P", 1}})), sl), Error);
  }

  TEST_CASE("realize") {
    SimLanguage sl = sim_rs();
    Language l1 = sl.factor(Factor::First), l2 = sl.factor(Factor::Second);
    SemiSimpleFormula eq{{{parse_formula("(= x y)", l1), parse_formula("(= x y)", l2)}}, {"x", "y"}};
    CHECK(render_formula(realize(eq, sl)) == "(and (sim1 x y) (sim2 x y))");
    CHECK(render_formula(realize(SemiSimpleFormula{}, sl)) == "false");
    SemiSimpleFormula top{{{Formula::verum(), Formula::verum()}}, {}};
    CHECK(render_formula(realize(top, sl)) == "(and true true)");
  }

  TEST_CASE("equivalence checks") {
    SimLanguage sl = sim_rs();
    StructureBuilder b1(sl.factor(Factor::First), 2), b2(sl.factor(Factor::Second), 2);
    b1.constant("a", 0);
    b2.constant("b", 0);
    FiniteStructure n = product(b1.build(), b2.build(), sl);
    Formula f = parse_formula("(= x y)", sl.base());
    CHECK(check_equivalent(n, f, f));
    CHECK(check_equivalent(n, f, parse_formula("(and (sim1 x y) (sim2 x y))", sl.base())));
    auto r = check_equivalent(n, parse_formula("(sim1 x y)", sl.base()), parse_formula("(sim2 x y)", sl.base()));
    CHECK_FALSE(r);
    REQUIRE(r.counterexample);
    CHECK(*r.counterexample == Assignment{{"x", 0}, {"y", 1}});
    CHECK_THROWS_AS(check_equivalent(n, f, parse_formula("(sim1 x z)", sl.base())), Error);
  }

  TEST_CASE("dedupe removes repeated disjuncts only when asked") {
    SimLanguage sl = sim_rs();
    Formula f = parse_formula("(or (S x) (S x))", sl.base());
    CHECK(semi_simplify(f, sl).disjuncts.size() == 2);
    CHECK(semi_simplify(f, sl, {true}).disjuncts.size() == 1);
  }

  TEST_CASE("normal form is equivalent on random products") {
    Rng rng(31);
    for (int i = 0; i < 120; ++i) {
      FactorPair p = random_factor_pair(rng, {3, 1, 2, 2, 2, rng.chance(1, 3)});
      RandomFormulaOptions fo;
      fo.depth = rng.below(3);
      fo.max_operators = 4;
      Formula f = random_formula(rng, p.sl.base(), fo);
      SemiSimpleFormula ssf = semi_simplify(f, p.sl);
      std::vector<std::string> vars{"x", "y"};
      auto expected = oracle::satisfying(p.n, f, vars);
      CHECK(oracle::satisfying(p.n, realize(ssf, p.sl), vars) == expected);

      // Each disjunct is a box: a first-factor set times a second-factor set.
      ProductEncoding enc(p.m1.size(), p.m2.size());
      std::vector<Tuple> boxes;
      for (const auto& t : oracle::all_tuples(p.n.size(), 2)) {
        oracle::Env e1{{"x", enc.project(Factor::First, t[0])}, {"y", enc.project(Factor::First, t[1])}};
        oracle::Env e2{{"x", enc.project(Factor::Second, t[0])}, {"y", enc.project(Factor::Second, t[1])}};
        for (const auto& d : ssf.disjuncts) {
          if (oracle::holds(p.m1, d.psi1, e1) && oracle::holds(p.m2, d.psi2, e2)) {
            boxes.push_back(t);
            break;
          }
        }
      }
      CHECK(boxes == expected);
    }
  }

  TEST_CASE("nnf preserves meaning on random structures") {
    Rng rng(32);
    for (int i = 0; i < 100; ++i) {
      Language l = random_language(rng, {"L", 0, 2, 1, 2, 2});
      FiniteStructure s = random_structure(rng, l, 1, 3);
      Formula f = random_formula(rng, l);
      std::vector<std::string> vars{"x", "y"};
      CHECK(oracle::satisfying(s, to_nnf(f), vars) == oracle::satisfying(s, f, vars));
    }
  }
}
