#include "simprod/selftest.hpp"

#include <sstream>

#include "simprod/error.hpp"
#include "simprod/normal_form.hpp"

namespace simprod {

FactorPair random_factor_pair(Rng& rng, const FactorPairOptions& options) {
  RandomLanguageOptions lo;
  lo.min_constants = options.min_constants;
  lo.max_constants = options.max_constants;
  lo.max_predicates = options.max_predicates;
  lo.max_arity = options.max_arity;
  lo.name = "L1";
  lo.constant_prefix = "a";
  lo.predicate_prefix = options.shared_names ? "R" : "P";
  Language l1 = random_language(rng, lo);
  lo.name = "L2";
  lo.constant_prefix = "b";
  lo.predicate_prefix = options.shared_names ? "R" : "Q";
  Language l2 = random_language(rng, lo);
  SimLanguage sl = build_sim_language(l1, l2);
  FiniteStructure m1 = random_structure(rng, l1, 1, options.max_size, "M1");
  FiniteStructure m2 = random_structure(rng, l2, 1, options.max_size, "M2");
  FiniteStructure n = product(m1, m2, sl);
  return {std::move(sl), std::move(m1), std::move(m2), std::move(n)};
}

Verdict check_tsim(const FactorPair& p) {
  auto report = check_sentences(p.n, build_t_sim({}, {}, p.sl));
  if (report.passed()) return Verdict::pass();
  const auto& v = *report.first_failure();
  std::string w = render_formula(v.sentence);
  if (v.counterexample) w += " fails at " + format_assignment(*v.counterexample);
  return Verdict::fail(w);
}

Verdict check_transfer(const FactorPair& p, const Formula& phi, Factor k, const ConversionOptions& options) {
  Formula converted = standard_conversion(phi, k, p.sl, options);
  auto vars = free_variables(phi);
  CompiledFormula on_factor(p.factor(k), phi, vars);
  CompiledFormula on_product(p.n, converted, vars);
  ProductEncoding enc(p.m1.size(), p.m2.size());
  Verdict verdict;
  for_each_tuple(p.n.size(), vars.size(), [&](const Tuple& t) {
    if (on_product(t) == on_factor(enc.project(k, t))) return true;
    Assignment a;
    for (std::size_t i = 0; i < vars.size(); ++i) a[vars[i]] = t[i];
    verdict = Verdict::fail(render_formula(phi) + " vs " + render_formula(converted) + " at " + format_assignment(a));
    return false;
  });
  return verdict;
}

Verdict check_normal_form(const FactorPair& p, const Formula& f) {
  Formula g = realize(semi_simplify(f, p.sl), p.sl);
  auto vars = free_variables(f);
  auto result = check_equivalent(p.n, f, g, vars);
  if (result) return Verdict::pass();
  return Verdict::fail(render_formula(f) + " vs " + render_formula(g) + " at " + format_assignment(*result.counterexample));
}

Verdict check_roundtrip(const FactorPair& p, std::span<const Element> perm) {
  FiniteStructure permuted = permute(p.n, perm);
  Decomposition d = decompose(permuted, p.sl);
  FiniteStructure back = product(d.factor1, d.factor2, p.sl);
  if (!isomorphic(back, permuted)) return Verdict::fail("product of the quotients is not isomorphic to the input");
  if (!isomorphic(d.factor1, p.m1) || !isomorphic(d.factor2, p.m2))
    return Verdict::fail("quotients are not isomorphic to the original factors");
  return Verdict::pass();
}

SelftestResult run_selftest(std::uint64_t seed, std::size_t cases) {
  SelftestResult result;
  std::ostringstream out;
  Rng master(seed);
  out << "selftest seed " << seed << " cases " << cases << "\n";

  auto record = [&](std::size_t i, const char* property, const Verdict& v) {
    ++result.checks;
    out << "case " << i << " " << property << " " << (v ? "PASS" : "FAIL") << "\n";
    if (!v) {
      ++result.failures;
      out << "  counterexample: " << v.witness << "\n";
    }
  };

  for (std::size_t i = 0; i < cases; ++i) {
    Rng rng(master.next());
    FactorPairOptions po;
    po.max_constants = 2;
    po.shared_names = rng.chance(1, 4);
    FactorPair p = random_factor_pair(rng, po);
    out << "case " << i << " sizes " << p.m1.size() << "x" << p.m2.size() << "\n";

    auto guarded = [&](const char* property, auto&& check) {
      try {
        record(i, property, check());
      } catch (const Error& e) {
        record(i, property, Verdict::fail(std::string("error: ") + e.what()));
      }
    };

    guarded("tsim", [&] { return check_tsim(p); });

    Factor k = rng.chance(1, 2) ? Factor::First : Factor::Second;
    RandomFormulaOptions fo;
    fo.depth = 2;
    Formula phi = random_formula(rng, p.sl.factor(k), fo);
    guarded("transfer", [&] { return check_transfer(p, phi, k); });

    guarded("syntax", [&] {
      Formula back = parse_formula(render_formula(phi), p.sl.factor(k));
      return back == phi ? Verdict::pass() : Verdict::fail(render_formula(phi) + " reparses differently");
    });

    guarded("nnf", [&] {
      auto r = check_equivalent(p.factor(k), phi, to_nnf(phi), free_variables(phi));
      return r ? Verdict::pass() : Verdict::fail(render_formula(phi) + " at " + format_assignment(*r.counterexample));
    });

    RandomFormulaOptions go;
    go.depth = 1;
    go.max_operators = 4;
    Formula f = random_formula(rng, p.sl.base(), go);
    guarded("normal-form", [&] { return check_normal_form(p, f); });

    auto perm = rng.permutation(p.n.size());
    guarded("roundtrip", [&] { return check_roundtrip(p, perm); });
  }
  out << "checks " << result.checks << " failures " << result.failures << "\n";
  out << "RESULT selftest " << (result.passed() ? "PASS" : "FAIL") << "\n";
  result.report = out.str();
  return result;
}

}  // namespace simprod
