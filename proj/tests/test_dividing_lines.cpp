#include <doctest.h>

#include "oracles.hpp"
#include "simprod/dividing_lines.hpp"
#include "simprod/error.hpp"
#include "simprod/product.hpp"
#include "simprod/random.hpp"

using namespace simprod;

namespace {

Language order_language() { return Language("Ord", {}, {{"Lt", 2}}); }

FiniteStructure chain(std::size_t n) {
  StructureBuilder b(order_language(), n, "chain");
  for (Element i = 0; i < n; ++i)
    for (Element j = i + 1; j < n; ++j) b.tuple("Lt", {i, j});
  return b.build();
}

FiniteStructure pure_set(std::size_t n) {
  return StructureBuilder(Language("E", {}, {{"U", 1}}), n, "set").build();
}

struct Grid {
  SimLanguage sl;
  FiniteStructure n;
};

Grid grid(std::size_t n1, std::size_t n2) {
  SimLanguage sl = build_sim_language(Language("A", {"a"}, {{"P", 1}}), Language("B", {"b"}, {{"Q", 1}}));
  StructureBuilder b1(sl.factor(Factor::First), n1), b2(sl.factor(Factor::Second), n2);
  b1.constant("a", 0);
  b2.constant("b", 0);
  FiniteStructure n = product(b1.build(), b2.build(), sl);
  return {std::move(sl), std::move(n)};
}

IndexedSequence singletons(std::vector<Element> xs) {
  IndexedSequence s;
  for (Element x : xs) s.items.push_back({x});
  return s;
}

SequenceFormula lt_pair() {
  return {parse_formula("(Lt x1 x2)", order_language()), {{"x1"}, {"x2"}}, {}};
}

}  // namespace

TEST_SUITE("dividing_lines") {
  TEST_CASE("trace families") {
    FiniteStructure s = pure_set(3);
    PartitionedFormula eq{parse_formula("(= x y)", s.language()), {"x"}, {"y"}};
    auto traces = trace_family(s, eq);
    CHECK(traces == std::set<Trace>{{0}, {1}, {2}});

    Grid g = grid(2, 3);
    PartitionedFormula sim1{parse_formula("(sim1 x y)", g.sl.base()), {"x"}, {"y"}};
    auto classes = trace_family(g.n, sim1);
    CHECK(classes.size() == 2);
    for (const auto& t : classes) CHECK(t.size() == 3);

    PartitionedFormula never{Formula::falsum(), {"x"}, {"y"}};
    CHECK(trace_family(s, never) == std::set<Trace>{{}});

    PartitionedFormula bad{parse_formula("(= x y)", s.language()), {"x"}, {}};
    CHECK_THROWS_AS(trace_family(s, bad), Error);
  }

  TEST_CASE("VC dimension examples") {
    FiniteStructure s3 = pure_set(3);
    CHECK(vc_dim(s3, {parse_formula("(= x y)", s3.language()), {"x"}, {"y"}}) == 1);
    FiniteStructure s4 = pure_set(4);
    CHECK(vc_dim(s4, {parse_formula("(or (= x y1) (= x y2))", s4.language()), {"x"}, {"y1", "y2"}}) == 2);
    FiniteStructure c4 = chain(4);
    CHECK(vc_dim(c4, {parse_formula("(Lt x y)", order_language()), {"x"}, {"y"}}) == 1);
    CHECK(vc_dim(s3, {Formula::falsum(), {"x"}, {"y"}}) == 0);
  }

  TEST_CASE("VC dimension agrees with subset enumeration") {
    Rng rng(41);
    for (int i = 0; i < 60; ++i) {
      Language l = random_language(rng, {"L", 0, 1, 1, 2, 2});
      FiniteStructure s = random_structure(rng, l, 2, 5);
      RandomFormulaOptions fo;
      fo.depth = rng.below(2);
      fo.free_variables = {"x", "y", "z"};
      Formula f = random_formula(rng, l, fo);
      std::vector<std::string> objects{"x"}, params{"y", "z"};
      PartitionedFormula pf{f, objects, params};
      CHECK(vc_dim(s, pf) == oracle::vc_dim(s, f, objects, params, oracle::all_tuples(s.size(), 1),
                                            oracle::all_tuples(s.size(), 2)));
    }
  }

  TEST_CASE("shatter counts") {
    std::set<Trace> family{{}, {0}, {1}, {0, 1}, {2}};
    std::vector<std::size_t> pts{0, 1};
    CHECK(shatter_count(family, pts) == 4);
    std::vector<std::size_t> three{0, 1, 2};
    CHECK(shatter_count(family, three) == 5);
  }

  TEST_CASE("indiscernibility examples") {
    FiniteStructure c3 = chain(3);
    std::vector<SequenceFormula> f{lt_pair()};
    CHECK(check_indiscernible(c3, singletons({1, 1, 1}), {}, f));
    CHECK(check_indiscernible(c3, singletons({0, 1, 2}), {}, f));
    Verdict v = check_indiscernible(c3, singletons({0, 2, 1}), {}, f);
    CHECK_FALSE(v);
    CHECK(v.witness.find("indices (0,1) give true") != std::string::npos);
    CHECK(v.witness.find("indices (1,2) give false") != std::string::npos);

    IndexedSequence pairs{{{0, 1}, {1, 2}}};
    CHECK_THROWS_AS(check_indiscernible(c3, pairs, {}, f), ArityError);
  }

  TEST_CASE("indiscernibility agrees with direct enumeration") {
    Rng rng(42);
    for (int i = 0; i < 80; ++i) {
      Language l = random_language(rng, {"L", 0, 0, 1, 2, 2});
      FiniteStructure s = random_structure(rng, l, 2, 4);
      RandomFormulaOptions fo;
      fo.depth = rng.below(2);
      fo.free_variables = {"x1", "x2", "p"};
      fo.constants = false;
      Formula f = random_formula(rng, l, fo);
      std::vector<Element> seq;
      for (std::size_t j = 0, len = rng.between(2, 5); j < len; ++j) seq.push_back(static_cast<Element>(rng.below(s.size())));
      std::vector<Element> params{static_cast<Element>(rng.below(s.size())), static_cast<Element>(rng.below(s.size()))};
      SequenceFormula sf{f, {{"x1"}, {"x2"}}, {"p"}};
      std::vector<SequenceFormula> fs{sf};
      CHECK(check_indiscernible(s, singletons(seq), params, fs).holds ==
            oracle::indiscernible(s, seq, f, {"x1", "x2"}, "p", params));
    }
  }

  TEST_CASE("mutual indiscernibility") {
    FiniteStructure c2 = chain(2);
    std::vector<SequenceFormula> f{{parse_formula("(Lt x1 p)", order_language()), {{"x1"}}, {"p"}}};
    std::vector<IndexedSequence> constant{singletons({0, 0}), singletons({1, 1})};
    CHECK(check_mutually_indiscernible(c2, constant, {}, f));
    std::vector<IndexedSequence> crossing{singletons({0, 1}), singletons({1, 0})};
    CHECK_FALSE(check_mutually_indiscernible(c2, crossing, {}, f));
    // With no outside parameters the intersection reading has nothing to test.
    CHECK(check_mutually_indiscernible(c2, crossing, {}, f, MutualParameters::Intersection));
    std::vector<IndexedSequence> one{singletons({0, 1})};
    std::vector<SequenceFormula> g{lt_pair()};
    CHECK(check_mutually_indiscernible(c2, one, {}, g).holds == check_indiscernible(c2, one[0], {}, g).holds);
  }

  TEST_CASE("insertion between indiscernible flanks") {
    FiniteStructure c5 = chain(5);
    std::vector<SequenceFormula> f{lt_pair()};
    FiniteStructure c1 = chain(1);
    auto same = distal_insertion_check(c1, singletons({0}), {0}, singletons({0}), {}, f);
    CHECK(same.inserted);
    auto ordered = distal_insertion_check(c5, singletons({0, 1}), {2}, singletons({3, 4}), {}, f);
    CHECK(ordered.flanks);
    CHECK(ordered.inserted);
    auto misplaced = distal_insertion_check(c5, singletons({0, 1}), {4}, singletons({2, 3}), {}, f);
    CHECK(misplaced.flanks);
    CHECK_FALSE(misplaced.inserted);
    CHECK_THROWS_AS(distal_insertion_check(c5, IndexedSequence{}, {2}, singletons({3}), {}, f), Error);
    CHECK_THROWS_AS(distal_insertion_check(c5, singletons({0}), {2, 3}, singletons({3}), {}, f), ArityError);
  }

  TEST_CASE("ICT patterns") {
    Grid g = grid(2, 2);
    ProductEncoding enc(2, 2);
    PartitionedFormula phi{parse_formula("(sim1 x y)", g.sl.base()), {"x"}, {"y"}};
    PartitionedFormula psi{parse_formula("(sim2 x y)", g.sl.base()), {"x"}, {"y"}};
    IctInstance inst{phi, psi, {{enc.encode(0, 0)}, {enc.encode(1, 0)}}, {{enc.encode(0, 0)}, {enc.encode(0, 1)}}};
    CHECK(check_ict_pattern(g.n, inst));

    IctInstance single{phi, psi, {{0}}, {{0}}};
    CHECK(check_ict_pattern(g.n, single));

    IctInstance same{phi, phi, {{enc.encode(0, 0)}, {enc.encode(1, 0)}}, {{enc.encode(0, 0)}, {enc.encode(1, 0)}}};
    CHECK_FALSE(check_ict_pattern(g.n, same));
  }

  TEST_CASE("TP2 witness shape") {
    Tp2Witness w = build_tp2_witness(2, 2);
    CHECK(w.structure.size() == 8);
    CHECK(path_of_rank(0, 2, 2) == std::vector<std::size_t>{1, 1});
    CHECK(path_of_rank(3, 2, 2) == std::vector<std::size_t>{2, 2});
    std::vector<std::size_t> eta{1, 1};
    CHECK(witness_block_set(eta, 2) == std::vector<std::size_t>{1, 3});
    // Row 0 of element 0 (eta = (1,1)) holds exactly for the elements standing for 1 and 3.
    CHECK(w.structure.holds("P", Tuple{0, 4}));
    CHECK(w.structure.holds("P", Tuple{0, 6}));
    CHECK_FALSE(w.structure.holds("P", Tuple{0, 5}));
    CHECK(w.array.cells[0][0] == Tuple{4});
    CHECK(w.array.cells[1][1] == Tuple{7});
    CHECK(build_tp2_witness(2, 3).structure.size() == 9 + 6);
    CHECK_THROWS_AS(build_tp2_witness(0, 2), Error);
    CHECK_THROWS_AS(build_tp2_witness(11, 2), Error);
  }

  TEST_CASE("TP2 array checks") {
    for (auto [n, m] : std::vector<std::pair<std::size_t, std::size_t>>{{1, 1}, {2, 2}, {2, 3}, {3, 2}}) {
      Tp2Witness w = build_tp2_witness(n, m);
      CHECK(check_tp2_array(w.structure, w.formula, w.array));
      Tp2Array k1 = w.array;
      k1.k = 1;
      CHECK_FALSE(check_tp2_array(w.structure, w.formula, k1));
      for (std::size_t k = 3; k <= m + 1; ++k) {
        Tp2Array larger = w.array;
        larger.k = k;
        CHECK(check_tp2_array(w.structure, w.formula, larger));
      }
    }
    Tp2Witness w = build_tp2_witness(2, 2);
    Tp2Array repeated = w.array;
    repeated.cells[0][1] = repeated.cells[0][0];
    Verdict v = check_tp2_array(w.structure, w.formula, repeated);
    CHECK_FALSE(v);
    CHECK(v.witness.find("row 0") != std::string::npos);
    Tp2Array wrong = w.array;
    wrong.cells[0].pop_back();
    CHECK_THROWS_AS(check_tp2_array(w.structure, w.formula, wrong), Error);
  }
}
