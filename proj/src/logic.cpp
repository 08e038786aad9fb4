#include "simprod/logic.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>

#include "simprod/error.hpp"

namespace simprod {

namespace {

constexpr std::array<std::string_view, 9> kKeywords = {
    "true", "false", "not", "and", "or", "implies", "exists", "forall", "="};

}  // namespace

bool is_keyword(std::string_view name) {
  return std::find(kKeywords.begin(), kKeywords.end(), name) != kKeywords.end();
}

bool is_valid_symbol_name(std::string_view name) {
  if (name.empty() || is_keyword(name)) return false;
  auto head = static_cast<unsigned char>(name.front());
  if (!std::isalpha(head) && head != '_') return false;
  return std::all_of(name.begin() + 1, name.end(), [](char c) {
    auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || u == '_' || u == '~';
  });
}

Language::Language(std::string name, std::vector<std::string> constants,
                   std::vector<PredicateSymbol> predicates)
    : name_(std::move(name)), constants_(std::move(constants)), predicates_(std::move(predicates)) {
  if (!is_valid_symbol_name(name_)) throw Error("invalid language name '" + name_ + "'");
  std::set<std::string> seen;
  auto declare = [&](const std::string& symbol) {
    if (!is_valid_symbol_name(symbol))
      throw Error("invalid symbol name '" + symbol + "' in language " + name_);
    if (!seen.insert(symbol).second)
      throw Error("symbol '" + symbol + "' declared twice in language " + name_);
  };
  for (const auto& c : constants_) declare(c);
  for (const auto& p : predicates_) {
    declare(p.name);
    if (p.arity == 0) throw Error("predicate '" + p.name + "' must have arity >= 1");
  }
}

std::optional<std::size_t> Language::constant_index(std::string_view name) const {
  for (std::size_t i = 0; i < constants_.size(); ++i)
    if (constants_[i] == name) return i;
  return std::nullopt;
}

std::optional<std::size_t> Language::predicate_index(std::string_view name) const {
  for (std::size_t i = 0; i < predicates_.size(); ++i)
    if (predicates_[i].name == name) return i;
  return std::nullopt;
}

std::size_t Language::arity(std::string_view predicate) const {
  auto idx = predicate_index(predicate);
  if (!idx) throw UnknownSymbolError("unknown predicate '" + std::string(predicate) + "' in language " + name_);
  return predicates_[*idx].arity;
}

// ---------------------------------------------------------------------------
// Formula nodes

struct Formula::Node {
  FormulaKind kind;
  std::vector<Term> terms;
  std::string name;  // predicate or bound variable
  std::vector<Formula> children;
};

Formula::Formula() : Formula(verum()) {}

Formula Formula::verum() {
  static const auto node = std::make_shared<const Node>(Node{FormulaKind::Verum, {}, {}, {}});
  return Formula(node);
}

Formula Formula::falsum() {
  static const auto node = std::make_shared<const Node>(Node{FormulaKind::Falsum, {}, {}, {}});
  return Formula(node);
}

Formula Formula::equal(Term lhs, Term rhs) {
  return Formula(std::make_shared<const Node>(
      Node{FormulaKind::Equal, {std::move(lhs), std::move(rhs)}, {}, {}}));
}

Formula Formula::atom(std::string predicate, std::vector<Term> args) {
  return Formula(std::make_shared<const Node>(
      Node{FormulaKind::Atom, std::move(args), std::move(predicate), {}}));
}

Formula Formula::negation(Formula operand) {
  return Formula(std::make_shared<const Node>(Node{FormulaKind::Not, {}, {}, {std::move(operand)}}));
}

Formula Formula::conjunction(Formula lhs, Formula rhs) {
  return Formula(std::make_shared<const Node>(
      Node{FormulaKind::And, {}, {}, {std::move(lhs), std::move(rhs)}}));
}

Formula Formula::disjunction(Formula lhs, Formula rhs) {
  return Formula(std::make_shared<const Node>(
      Node{FormulaKind::Or, {}, {}, {std::move(lhs), std::move(rhs)}}));
}

Formula Formula::implication(Formula lhs, Formula rhs) {
  return Formula(std::make_shared<const Node>(
      Node{FormulaKind::Implies, {}, {}, {std::move(lhs), std::move(rhs)}}));
}

Formula Formula::exists(std::string variable, Formula body) {
  return Formula(std::make_shared<const Node>(
      Node{FormulaKind::Exists, {}, std::move(variable), {std::move(body)}}));
}

Formula Formula::forall(std::string variable, Formula body) {
  return Formula(std::make_shared<const Node>(
      Node{FormulaKind::Forall, {}, std::move(variable), {std::move(body)}}));
}

FormulaKind Formula::kind() const { return node_->kind; }

bool Formula::is_atomic() const {
  auto k = kind();
  return k == FormulaKind::Verum || k == FormulaKind::Falsum || k == FormulaKind::Equal ||
         k == FormulaKind::Atom;
}

bool Formula::is_binary() const {
  auto k = kind();
  return k == FormulaKind::And || k == FormulaKind::Or || k == FormulaKind::Implies;
}

bool Formula::is_quantifier() const {
  return kind() == FormulaKind::Exists || kind() == FormulaKind::Forall;
}

const std::vector<Term>& Formula::terms() const { return node_->terms; }
const std::string& Formula::predicate() const { return node_->name; }
const std::string& Formula::variable() const { return node_->name; }
const Formula& Formula::body() const { return node_->children.at(0); }
const Formula& Formula::lhs() const { return node_->children.at(0); }
const Formula& Formula::rhs() const { return node_->children.at(1); }

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  return x.kind == y.kind && x.terms == y.terms && x.name == y.name && x.children == y.children;
}

Formula conjoin(std::span<const Formula> parts) {
  if (parts.empty()) return Formula::verum();
  Formula acc = parts.back();
  for (auto it = parts.rbegin() + 1; it != parts.rend(); ++it) acc = Formula::conjunction(*it, acc);
  return acc;
}

Formula disjoin(std::span<const Formula> parts) {
  if (parts.empty()) return Formula::falsum();
  Formula acc = parts.back();
  for (auto it = parts.rbegin() + 1; it != parts.rend(); ++it) acc = Formula::disjunction(*it, acc);
  return acc;
}

Formula biconditional(const Formula& a, const Formula& b) {
  return Formula::conjunction(Formula::implication(a, b), Formula::implication(b, a));
}

Formula exists_all(std::span<const std::string> variables, Formula body) {
  for (auto it = variables.rbegin(); it != variables.rend(); ++it) body = Formula::exists(*it, body);
  return body;
}

Formula forall_all(std::span<const std::string> variables, Formula body) {
  for (auto it = variables.rbegin(); it != variables.rend(); ++it) body = Formula::forall(*it, body);
  return body;
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

const char* keyword_of(FormulaKind k) {
  switch (k) {
    case FormulaKind::Not: return "not";
    case FormulaKind::And: return "and";
    case FormulaKind::Or: return "or";
    case FormulaKind::Implies: return "implies";
    case FormulaKind::Exists: return "exists";
    case FormulaKind::Forall: return "forall";
    default: return "";
  }
}

void render_into(const Formula& f, std::string& out) {
  switch (f.kind()) {
    case FormulaKind::Verum: out += "true"; return;
    case FormulaKind::Falsum: out += "false"; return;
    case FormulaKind::Equal:
      out += "(= " + f.terms()[0].name + " " + f.terms()[1].name + ")";
      return;
    case FormulaKind::Atom:
      out += "(" + f.predicate();
      for (const auto& t : f.terms()) out += " " + t.name;
      out += ")";
      return;
    case FormulaKind::Not:
      out += "(not ";
      render_into(f.body(), out);
      out += ")";
      return;
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Implies:
      out += "(";
      out += keyword_of(f.kind());
      out += " ";
      render_into(f.lhs(), out);
      out += " ";
      render_into(f.rhs(), out);
      out += ")";
      return;
    case FormulaKind::Exists:
    case FormulaKind::Forall:
      out += "(";
      out += keyword_of(f.kind());
      out += " " + f.variable() + " ";
      render_into(f.body(), out);
      out += ")";
      return;
  }
}

}  // namespace

std::string render_formula(const Formula& f) {
  std::string out;
  render_into(f, out);
  return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Parser {
 public:
  Parser(std::string_view text, const Language& lang) : text_(text), lang_(lang) {}

  bool at_end() {
    skip_space();
    return pos_ >= text_.size();
  }

  Formula formula() {
    skip_space();
    std::size_t start = pos_;
    if (peek() != '(') {
      auto word = name();
      if (word == "true") return Formula::verum();
      if (word == "false") return Formula::falsum();
      throw SyntaxError("expected formula, found '" + std::string(word) + "'", start);
    }
    ++pos_;
    skip_space();
    std::size_t head_pos = pos_;
    std::string head(name());
    Formula result;
    if (head == "=") {
      Term a = term();
      Term b = term();
      result = Formula::equal(std::move(a), std::move(b));
    } else if (head == "not") {
      result = Formula::negation(formula());
    } else if (head == "and" || head == "or" || head == "implies") {
      Formula a = formula();
      Formula b = formula();
      if (head == "and") result = Formula::conjunction(std::move(a), std::move(b));
      else if (head == "or") result = Formula::disjunction(std::move(a), std::move(b));
      else result = Formula::implication(std::move(a), std::move(b));
    } else if (head == "exists" || head == "forall") {
      skip_space();
      std::size_t var_pos = pos_;
      std::string var(name());
      if (!is_valid_symbol_name(var)) throw SyntaxError("invalid variable name '" + var + "'", var_pos);
      if (lang_.has_constant(var) || lang_.has_predicate(var))
        throw SyntaxError("cannot bind declared symbol '" + var + "'", var_pos);
      Formula body = formula();
      result = head == "exists" ? Formula::exists(var, std::move(body)) : Formula::forall(var, std::move(body));
    } else if (is_keyword(head) || !is_valid_symbol_name(head)) {
      throw SyntaxError("unexpected '" + head + "' after '('", head_pos);
    } else {
      if (!lang_.has_predicate(head))
        throw UnknownSymbolError("unknown predicate '" + head + "' at offset " + std::to_string(head_pos));
      std::vector<Term> args;
      skip_space();
      while (peek() != ')' && pos_ < text_.size()) {
        args.push_back(term());
        skip_space();
      }
      std::size_t arity = lang_.arity(head);
      if (args.size() != arity)
        throw ArityError("predicate '" + head + "' expects " + std::to_string(arity) + " arguments, got " +
                         std::to_string(args.size()) + " at offset " + std::to_string(head_pos));
      result = Formula::atom(head, std::move(args));
    }
    skip_space();
    if (peek() != ')') throw SyntaxError("expected ')'", pos_);
    ++pos_;
    return result;
  }

 private:
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string_view name() {
    skip_space();
    std::size_t start = pos_;
    if (peek() == '=') {
      ++pos_;
      return text_.substr(start, 1);
    }
    while (pos_ < text_.size()) {
      auto c = static_cast<unsigned char>(text_[pos_]);
      if (!(std::isalnum(c) || c == '_' || c == '~')) break;
      ++pos_;
    }
    if (pos_ == start) {
      if (pos_ >= text_.size()) throw SyntaxError("unexpected end of input", pos_);
      throw SyntaxError(std::string("unexpected character '") + text_[pos_] + "'", pos_);
    }
    return text_.substr(start, pos_ - start);
  }

  Term term() {
    skip_space();
    std::size_t start = pos_;
    std::string word(name());
    if (!is_valid_symbol_name(word)) throw SyntaxError("invalid term '" + word + "'", start);
    if (lang_.has_constant(word)) return Term::constant(word);
    if (lang_.has_predicate(word))
      throw SyntaxError("predicate '" + word + "' used as a term", start);
    return Term::variable(word);
  }

  std::string_view text_;
  const Language& lang_;
  std::size_t pos_ = 0;
};

}  // namespace

Formula parse_formula(std::string_view text, const Language& lang) {
  Parser p(text, lang);
  Formula f = p.formula();
  if (!p.at_end()) throw SyntaxError("trailing input after formula", text.size());
  return f;
}

std::vector<Formula> parse_formulas(std::string_view text, const Language& lang) {
  Parser p(text, lang);
  std::vector<Formula> out;
  while (!p.at_end()) out.push_back(p.formula());
  return out;
}

// ---------------------------------------------------------------------------
// Structural utilities

void check_formula(const Formula& f, const Language& lang) {
  auto check_term = [&](const Term& t) {
    if (t.is_constant() && !lang.has_constant(t.name))
      throw UnknownSymbolError("unknown constant '" + t.name + "' in language " + lang.name());
    if (t.is_variable() && (lang.has_constant(t.name) || lang.has_predicate(t.name)))
      throw UnknownSymbolError("variable '" + t.name + "' clashes with a symbol of language " + lang.name());
  };
  switch (f.kind()) {
    case FormulaKind::Verum:
    case FormulaKind::Falsum:
      return;
    case FormulaKind::Equal:
      for (const auto& t : f.terms()) check_term(t);
      return;
    case FormulaKind::Atom: {
      std::size_t arity = lang.arity(f.predicate());
      if (f.terms().size() != arity)
        throw ArityError("predicate '" + f.predicate() + "' expects " + std::to_string(arity) + " arguments");
      for (const auto& t : f.terms()) check_term(t);
      return;
    }
    case FormulaKind::Not:
      check_formula(f.body(), lang);
      return;
    case FormulaKind::Exists:
    case FormulaKind::Forall:
      check_term(Term::variable(f.variable()));
      check_formula(f.body(), lang);
      return;
    default:
      check_formula(f.lhs(), lang);
      check_formula(f.rhs(), lang);
  }
}

namespace {

void collect_free(const Formula& f, std::vector<std::string>& bound, std::vector<std::string>& out) {
  auto visit = [&](const Term& t) {
    if (!t.is_variable()) return;
    if (std::find(bound.begin(), bound.end(), t.name) != bound.end()) return;
    if (std::find(out.begin(), out.end(), t.name) == out.end()) out.push_back(t.name);
  };
  switch (f.kind()) {
    case FormulaKind::Verum:
    case FormulaKind::Falsum:
      return;
    case FormulaKind::Equal:
    case FormulaKind::Atom:
      for (const auto& t : f.terms()) visit(t);
      return;
    case FormulaKind::Not:
      collect_free(f.body(), bound, out);
      return;
    case FormulaKind::Exists:
    case FormulaKind::Forall:
      bound.push_back(f.variable());
      collect_free(f.body(), bound, out);
      bound.pop_back();
      return;
    default:
      collect_free(f.lhs(), bound, out);
      collect_free(f.rhs(), bound, out);
  }
}

}  // namespace

std::vector<std::string> free_variables(const Formula& f) {
  std::vector<std::string> bound;
  std::vector<std::string> out;
  collect_free(f, bound, out);
  return out;
}

bool is_sentence(const Formula& f) { return free_variables(f).empty(); }

std::size_t quantifier_depth(const Formula& f) {
  if (f.is_atomic()) return 0;
  if (f.is(FormulaKind::Not)) return quantifier_depth(f.body());
  if (f.is_quantifier()) return 1 + quantifier_depth(f.body());
  return std::max(quantifier_depth(f.lhs()), quantifier_depth(f.rhs()));
}

std::size_t formula_size(const Formula& f) {
  if (f.is_atomic()) return 1;
  if (f.is(FormulaKind::Not) || f.is_quantifier()) return 1 + formula_size(f.body());
  return 1 + formula_size(f.lhs()) + formula_size(f.rhs());
}

namespace {

void collect_names(const Formula& f, std::set<std::string>& out) {
  if (f.is(FormulaKind::Equal) || f.is(FormulaKind::Atom)) {
    for (const auto& t : f.terms()) out.insert(t.name);
  } else if (f.is(FormulaKind::Not)) {
    collect_names(f.body(), out);
  } else if (f.is_quantifier()) {
    out.insert(f.variable());
    collect_names(f.body(), out);
  } else if (f.is_binary()) {
    collect_names(f.lhs(), out);
    collect_names(f.rhs(), out);
  }
}

Formula rename_with(const Formula& f, std::map<std::string, std::string>& scope, FreshNames& fresh) {
  auto map_term = [&](const Term& t) {
    if (!t.is_variable()) return t;
    auto it = scope.find(t.name);
    return it == scope.end() ? t : Term::variable(it->second);
  };
  switch (f.kind()) {
    case FormulaKind::Verum:
    case FormulaKind::Falsum:
      return f;
    case FormulaKind::Equal:
      return Formula::equal(map_term(f.terms()[0]), map_term(f.terms()[1]));
    case FormulaKind::Atom: {
      std::vector<Term> args;
      args.reserve(f.terms().size());
      for (const auto& t : f.terms()) args.push_back(map_term(t));
      return Formula::atom(f.predicate(), std::move(args));
    }
    case FormulaKind::Not:
      return Formula::negation(rename_with(f.body(), scope, fresh));
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
      std::string name = fresh.next();
      std::optional<std::string> shadowed;
      if (auto it = scope.find(f.variable()); it != scope.end()) shadowed = it->second;
      scope[f.variable()] = name;
      Formula body = rename_with(f.body(), scope, fresh);
      if (shadowed) scope[f.variable()] = *shadowed;
      else scope.erase(f.variable());
      return f.is(FormulaKind::Exists) ? Formula::exists(name, body) : Formula::forall(name, body);
    }
    case FormulaKind::And:
      return Formula::conjunction(rename_with(f.lhs(), scope, fresh), rename_with(f.rhs(), scope, fresh));
    case FormulaKind::Or:
      return Formula::disjunction(rename_with(f.lhs(), scope, fresh), rename_with(f.rhs(), scope, fresh));
    case FormulaKind::Implies:
      return Formula::implication(rename_with(f.lhs(), scope, fresh), rename_with(f.rhs(), scope, fresh));
  }
  return f;
}

}  // namespace

std::set<std::string> symbol_names(const Formula& f) {
  std::set<std::string> out;
  collect_names(f, out);
  return out;
}

std::string FreshNames::next() {
  for (;;) {
    std::string candidate = prefix_ + std::to_string(counter_++);
    if (avoid_.insert(candidate).second) return candidate;
  }
}

Formula rename_bound(const Formula& f, const std::set<std::string>& reserved) {
  std::set<std::string> avoid = symbol_names(f);
  avoid.insert(reserved.begin(), reserved.end());
  FreshNames fresh(std::move(avoid));
  std::map<std::string, std::string> scope;
  return rename_with(f, scope, fresh);
}

}  // namespace simprod
