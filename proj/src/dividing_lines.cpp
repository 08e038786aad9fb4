#include "simprod/dividing_lines.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>

#include "simprod/error.hpp"

namespace simprod {

namespace {

std::vector<Element> allowed_or_all(const FiniteStructure& s, std::vector<Element> allowed) {
  if (allowed.empty()) {
    allowed.resize(s.size());
    for (Element e = 0; e < s.size(); ++e) allowed[e] = e;
    return allowed;
  }
  std::sort(allowed.begin(), allowed.end());
  allowed.erase(std::unique(allowed.begin(), allowed.end()), allowed.end());
  for (Element e : allowed)
    if (e >= s.size()) throw Error("element " + std::to_string(e) + " out of range");
  return allowed;
}

// Tuples of `arity` elements drawn from `elements`, lexicographic.
template <typename Visit>
bool for_each_tuple_over(std::span<const Element> elements, std::size_t arity, Visit&& visit) {
  return for_each_tuple(elements.size(), arity, [&](const Tuple& idx) {
    Tuple t(arity);
    for (std::size_t i = 0; i < arity; ++i) t[i] = elements[idx[i]];
    return visit(static_cast<const Tuple&>(t));
  });
}

// Strictly increasing index tuples of length n below len.
template <typename Visit>
bool for_each_increasing(std::size_t len, std::size_t n, Visit&& visit) {
  if (n > len) return true;
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  for (;;) {
    if (!visit(static_cast<const std::vector<std::size_t>&>(idx))) return false;
    std::size_t i = n;
    while (i > 0 && idx[i - 1] == len - n + (i - 1)) --i;
    if (i == 0) return true;
    ++idx[i - 1];
    for (std::size_t j = i; j < n; ++j) idx[j] = idx[j - 1] + 1;
  }
}

std::string format_indices(std::span<const std::size_t> idx) {
  std::string out = "(";
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(idx[i]);
  }
  return out + ")";
}

std::vector<std::string> concat(std::span<const std::string> a, std::span<const std::string> b) {
  std::vector<std::string> out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

class Bits {
 public:
  explicit Bits(std::size_t n = 0) : words_((n + 63) / 64, 0) {}
  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  bool any() const {
    return std::any_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w != 0; });
  }
  std::optional<std::size_t> first() const {
    for (std::size_t w = 0; w < words_.size(); ++w)
      if (words_[w]) return w * 64 + static_cast<std::size_t>(__builtin_ctzll(words_[w]));
    return std::nullopt;
  }
  Bits& operator&=(const Bits& o) {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= o.words_[w];
    return *this;
  }
  static Bits full(std::size_t n) {
    Bits b(n);
    for (std::size_t i = 0; i < n; ++i) b.set(i);
    return b;
  }

 private:
  std::vector<std::uint64_t> words_;
};

}  // namespace

// ---------------------------------------------------------------------------
// Shattering

void PartitionedFormula::validate() const {
  std::set<std::string> seen;
  for (const auto& v : objects)
    if (!seen.insert(v).second) throw Error("variable '" + v + "' repeated in the object tuple");
  for (const auto& v : params)
    if (!seen.insert(v).second) throw Error("variable '" + v + "' occurs twice among object and parameter variables");
  for (const auto& v : free_variables(formula))
    if (!seen.count(v)) throw Error("free variable '" + v + "' is neither an object nor a parameter");
}

std::vector<Tuple> object_space(const FiniteStructure& s, const PartitionedFormula& pf, const TraceDomain& domain) {
  auto elements = allowed_or_all(s, domain.object_elements);
  std::vector<Tuple> out;
  for_each_tuple_over(elements, pf.objects.size(), [&](const Tuple& t) {
    out.push_back(t);
    return true;
  });
  return out;
}

std::set<Trace> trace_family(const FiniteStructure& s, const PartitionedFormula& pf, const TraceDomain& domain) {
  pf.validate();
  auto objects = object_space(s, pf, domain);
  auto params = allowed_or_all(s, domain.param_elements);
  auto vars = concat(pf.objects, pf.params);
  CompiledFormula cf(s, pf.formula, vars);
  std::set<Trace> family;
  Tuple values(vars.size());
  for_each_tuple_over(params, pf.params.size(), [&](const Tuple& b) {
    std::copy(b.begin(), b.end(), values.begin() + static_cast<std::ptrdiff_t>(pf.objects.size()));
    Trace trace;
    for (std::size_t i = 0; i < objects.size(); ++i) {
      std::copy(objects[i].begin(), objects[i].end(), values.begin());
      if (cf(values)) trace.push_back(i);
    }
    family.insert(std::move(trace));
    return true;
  });
  return family;
}

std::size_t shatter_count(const std::set<Trace>& family, std::span<const std::size_t> points) {
  if (points.size() >= 64) throw Error("shatter_count supports at most 63 points");
  std::set<std::uint64_t> patterns;
  for (const auto& trace : family) {
    std::uint64_t mask = 0;
    for (std::size_t i = 0; i < points.size(); ++i)
      if (std::binary_search(trace.begin(), trace.end(), points[i])) mask |= std::uint64_t{1} << i;
    patterns.insert(mask);
  }
  return patterns.size();
}

std::size_t vc_dim(const FiniteStructure& s, const PartitionedFormula& pf, const TraceDomain& domain) {
  auto family = trace_family(s, pf, domain);
  const std::size_t points = object_space(s, pf, domain).size();
  std::size_t best = 0;
  std::vector<std::size_t> chosen;
  // Every subset of a shattered set is shattered, so only shattered sets are extended.
  std::function<void(std::size_t)> extend = [&](std::size_t start) {
    if (chosen.size() + 1 >= 64 || (std::size_t{1} << (chosen.size() + 1)) > family.size()) return;
    for (std::size_t p = start; p < points; ++p) {
      chosen.push_back(p);
      if (shatter_count(family, chosen) == (std::size_t{1} << chosen.size())) {
        best = std::max(best, chosen.size());
        extend(p + 1);
      }
      chosen.pop_back();
    }
  };
  extend(0);
  return best;
}

// ---------------------------------------------------------------------------
// Indiscernibility

void IndexedSequence::validate(const FiniteStructure& s) const {
  for (const auto& t : items) {
    if (t.size() != arity()) throw ArityError("sequence entries have different lengths");
    for (Element e : t)
      if (e >= s.size()) throw Error("sequence element " + std::to_string(e) + " out of range");
  }
}

Verdict check_indiscernible(const FiniteStructure& s, const IndexedSequence& seq, std::span<const Element> params,
                            std::span<const SequenceFormula> formulas) {
  seq.validate(s);
  for (Element e : params)
    if (e >= s.size()) throw Error("parameter element " + std::to_string(e) + " out of range");
  std::vector<Element> pool(params.begin(), params.end());
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());

  for (const auto& sf : formulas) {
    std::vector<std::string> vars;
    for (const auto& slot : sf.slots) {
      if (!seq.items.empty() && slot.size() != seq.arity())
        throw ArityError("formula slot takes " + std::to_string(slot.size()) + " variables but sequence entries have " +
                         std::to_string(seq.arity()));
      vars.insert(vars.end(), slot.begin(), slot.end());
    }
    const std::size_t slot_vars = vars.size();
    vars.insert(vars.end(), sf.params.begin(), sf.params.end());
    CompiledFormula cf(s, sf.formula, vars);
    const std::size_t n = sf.slots.size();

    Verdict verdict;
    for_each_tuple_over(pool, sf.params.size(), [&](const Tuple& p) {
      Tuple values(vars.size());
      std::copy(p.begin(), p.end(), values.begin() + static_cast<std::ptrdiff_t>(slot_vars));
      std::optional<bool> reference;
      std::vector<std::size_t> reference_idx;
      return for_each_increasing(seq.items.size(), n, [&](const std::vector<std::size_t>& idx) {
        std::size_t pos = 0;
        for (std::size_t i : idx)
          for (Element e : seq.items[i]) values[pos++] = e;
        bool v = cf(values);
        if (!reference) {
          reference = v;
          reference_idx = idx;
          return true;
        }
        if (v == *reference) return true;
        verdict = Verdict::fail(render_formula(sf.formula) + " with parameters " + format_tuple(p) + ": indices " +
                                format_indices(reference_idx) + " give " + (*reference ? "true" : "false") +
                                ", indices " + format_indices(idx) + " give " + (v ? "true" : "false"));
        return false;
      });
    });
    if (!verdict) return verdict;
  }
  return Verdict::pass();
}

Verdict check_mutually_indiscernible(const FiniteStructure& s, std::span<const IndexedSequence> family,
                                     std::span<const Element> params, std::span<const SequenceFormula> formulas,
                                     MutualParameters mode) {
  std::set<Element> base(params.begin(), params.end());
  for (std::size_t t = 0; t < family.size(); ++t) {
    std::set<Element> others;
    for (std::size_t u = 0; u < family.size(); ++u) {
      if (u == t) continue;
      for (const auto& item : family[u].items) others.insert(item.begin(), item.end());
    }
    std::vector<Element> pool;
    if (mode == MutualParameters::Union) {
      std::set_union(base.begin(), base.end(), others.begin(), others.end(), std::back_inserter(pool));
    } else {
      std::set_intersection(base.begin(), base.end(), others.begin(), others.end(), std::back_inserter(pool));
    }
    Verdict v = check_indiscernible(s, family[t], pool, formulas);
    if (!v) return Verdict::fail("sequence " + std::to_string(t) + ": " + v.witness);
  }
  return Verdict::pass();
}

InsertionResult distal_insertion_check(const FiniteStructure& s, const IndexedSequence& left, const Tuple& c,
                                       const IndexedSequence& right, std::span<const Element> params,
                                       std::span<const SequenceFormula> formulas) {
  if (left.items.empty() || right.items.empty()) throw Error("insertion check needs nonempty flanks");
  if (left.arity() != c.size() || right.arity() != c.size())
    throw ArityError("inserted tuple and flank entries have different lengths");
  IndexedSequence flanks{left.items};
  flanks.items.insert(flanks.items.end(), right.items.begin(), right.items.end());
  IndexedSequence inserted{left.items};
  inserted.items.push_back(c);
  inserted.items.insert(inserted.items.end(), right.items.begin(), right.items.end());
  return {check_indiscernible(s, flanks, params, formulas), check_indiscernible(s, inserted, params, formulas)};
}

// ---------------------------------------------------------------------------
// ICT patterns

namespace {

// values[l][x] = phi(x, params[l]).
std::vector<std::vector<bool>> instance_table(const FiniteStructure& s, const PartitionedFormula& pf,
                                              std::span<const Tuple> params) {
  pf.validate();
  if (pf.objects.size() != 1) throw Error("ICT formulas take exactly one object variable");
  auto vars = concat(pf.objects, pf.params);
  CompiledFormula cf(s, pf.formula, vars);
  std::vector<std::vector<bool>> table;
  for (const auto& p : params) {
    if (p.size() != pf.params.size())
      throw ArityError("parameter tuple " + format_tuple(p) + " does not match " + std::to_string(pf.params.size()) +
                       " parameter variables");
    Tuple values(vars.size());
    std::copy(p.begin(), p.end(), values.begin() + 1);
    std::vector<bool> row(s.size());
    for (Element x = 0; x < s.size(); ++x) {
      values[0] = x;
      row[x] = cf(values);
    }
    table.push_back(std::move(row));
  }
  return table;
}

}  // namespace

Verdict check_ict_pattern(const FiniteStructure& s, const IctInstance& inst) {
  auto phi = instance_table(s, inst.phi, inst.a);
  auto psi = instance_table(s, inst.psi, inst.b);
  for (std::size_t i = 0; i < phi.size(); ++i) {
    for (std::size_t j = 0; j < psi.size(); ++j) {
      bool found = false;
      for (Element x = 0; x < s.size() && !found; ++x) {
        bool ok = phi[i][x] && psi[j][x];
        for (std::size_t l = 0; ok && l < phi.size(); ++l) ok = l == i || !phi[l][x];
        for (std::size_t l = 0; ok && l < psi.size(); ++l) ok = l == j || !psi[l][x];
        found = ok;
      }
      if (!found) return Verdict::fail("cell (" + std::to_string(i) + "," + std::to_string(j) + ") has no witness");
    }
  }
  return Verdict::pass();
}

// ---------------------------------------------------------------------------
// TP2 arrays

void Tp2Array::validate(const FiniteStructure& s, const PartitionedFormula& pf) const {
  if (k == 0) throw Error("inconsistency bound k must be at least 1");
  if (cells.size() != rows) throw Error("array has " + std::to_string(cells.size()) + " rows, expected " + std::to_string(rows));
  for (const auto& row : cells) {
    if (row.size() != cols) throw Error("array row has " + std::to_string(row.size()) + " cells, expected " + std::to_string(cols));
    for (const auto& cell : row) {
      if (cell.size() != pf.params.size())
        throw ArityError("cell " + format_tuple(cell) + " does not match " + std::to_string(pf.params.size()) +
                         " parameter variables");
      for (Element e : cell)
        if (e >= s.size()) throw Error("cell element " + std::to_string(e) + " out of range");
    }
  }
}

namespace {

std::vector<std::vector<Bits>> cell_sets(const FiniteStructure& s, const PartitionedFormula& pf, const Tp2Array& arr,
                                         const std::vector<Tuple>& objects) {
  pf.validate();
  arr.validate(s, pf);
  auto vars = concat(pf.objects, pf.params);
  CompiledFormula cf(s, pf.formula, vars);
  std::vector<std::vector<Bits>> sets(arr.rows, std::vector<Bits>(arr.cols, Bits(objects.size())));
  Tuple values(vars.size());
  for (std::size_t t = 0; t < arr.rows; ++t) {
    for (std::size_t i = 0; i < arr.cols; ++i) {
      const Tuple& b = arr.cells[t][i];
      std::copy(b.begin(), b.end(), values.begin() + static_cast<std::ptrdiff_t>(pf.objects.size()));
      for (std::size_t o = 0; o < objects.size(); ++o) {
        std::copy(objects[o].begin(), objects[o].end(), values.begin());
        if (cf(values)) sets[t][i].set(o);
      }
    }
  }
  return sets;
}

}  // namespace

std::vector<std::vector<bool>> cell_satisfiable(const FiniteStructure& s, const PartitionedFormula& pf,
                                                const Tp2Array& arr) {
  auto objects = object_space(s, pf);
  auto sets = cell_sets(s, pf, arr, objects);
  std::vector<std::vector<bool>> out(arr.rows, std::vector<bool>(arr.cols));
  for (std::size_t t = 0; t < arr.rows; ++t)
    for (std::size_t i = 0; i < arr.cols; ++i) out[t][i] = sets[t][i].any();
  return out;
}

Verdict check_tp2_array(const FiniteStructure& s, const PartitionedFormula& pf, const Tp2Array& arr) {
  auto objects = object_space(s, pf);
  auto sets = cell_sets(s, pf, arr, objects);

  Verdict verdict;
  // Paths: one column per row.
  if (arr.cols > 0) {
    for_each_tuple(arr.cols, arr.rows, [&](const Tuple& path) {
      Bits common = Bits::full(objects.size());
      for (std::size_t t = 0; t < arr.rows; ++t) common &= sets[t][path[t]];
      if (common.any()) return true;
      verdict = Verdict::fail("path " + format_tuple(path) + " is inconsistent");
      return false;
    });
    if (!verdict) return verdict;
  }

  // Rows: every k cells are jointly inconsistent.
  for (std::size_t t = 0; t < arr.rows; ++t) {
    for_each_increasing(arr.cols, arr.k, [&](const std::vector<std::size_t>& cols) {
      Bits common = Bits::full(objects.size());
      for (std::size_t i : cols) common &= sets[t][i];
      auto hit = common.first();
      if (!hit) return true;
      verdict = Verdict::fail("row " + std::to_string(t) + " columns " + format_indices(cols) +
                              " are consistent, witnessed by " + format_tuple(objects[*hit]));
      return false;
    });
    if (!verdict) return verdict;
  }
  return Verdict::pass();
}

std::vector<std::size_t> path_of_rank(std::size_t rank, std::size_t n, std::size_t m) {
  std::vector<std::size_t> eta(n);
  for (std::size_t t = n; t > 0; --t) {
    eta[t - 1] = rank % m + 1;
    rank /= m;
  }
  return eta;
}

std::vector<std::size_t> witness_block_set(std::span<const std::size_t> eta, std::size_t m) {
  std::vector<std::size_t> out;
  for (std::size_t t = 1; t <= eta.size(); ++t) out.push_back((t - 1) * m + eta[t - 1]);
  return out;
}

Tp2Witness build_tp2_witness(std::size_t n, std::size_t m) {
  if (n == 0 || m == 0) throw Error("witness dimensions must be positive");
  std::size_t paths = 1;
  for (std::size_t t = 0; t < n; ++t) {
    paths *= m;
    if (paths > kMaxWitnessUniverse) break;
  }
  if (paths > kMaxWitnessUniverse || paths + n * m > kMaxWitnessUniverse)
    throw Error("witness for n=" + std::to_string(n) + ", m=" + std::to_string(m) + " exceeds " +
                std::to_string(kMaxWitnessUniverse) + " elements");

  Language lang("tp2", {}, {{"P", 2}});
  const std::size_t size = paths + n * m;
  StructureBuilder b(lang, size, "tp2_" + std::to_string(n) + "_" + std::to_string(m));
  // Element paths + j - 1 stands for the integer j in 1..nm.
  auto element_of = [&](std::size_t j) { return static_cast<Element>(paths + j - 1); };
  for (std::size_t i = 0; i < paths; ++i) {
    auto eta = path_of_rank(i, n, m);
    for (std::size_t j : witness_block_set(eta, m)) b.tuple("P", {static_cast<Element>(i), element_of(j)});
  }

  PartitionedFormula pf{parse_formula("(P x y)", lang), {"x"}, {"y"}};
  Tp2Array arr;
  arr.rows = n;
  arr.cols = m;
  arr.k = 2;
  arr.cells.assign(n, std::vector<Tuple>(m));
  // Zero-based cell (t, i) is the integer t*m + i + 1.
  for (std::size_t t = 0; t < n; ++t)
    for (std::size_t i = 0; i < m; ++i) arr.cells[t][i] = {element_of(t * m + i + 1)};
  return {b.build(), std::move(pf), std::move(arr)};
}

}  // namespace simprod
