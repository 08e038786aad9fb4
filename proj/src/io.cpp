#include "simprod/io.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "simprod/error.hpp"

namespace simprod {

namespace {

struct Line {
  std::size_t number;
  std::string_view text;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Report lines ("RESULT <op> <verdict>") count as comments so that command
// output can be piped into another command.
bool is_comment(std::string_view line) {
  line = trim(line);
  return (!line.empty() && line.front() == '#') || line.starts_with("RESULT ");
}

// Non-blank, non-comment lines with their numbers in the source.
std::vector<Line> content_lines(const Section& section) {
  std::vector<Line> out;
  std::string_view rest = section.text;
  std::size_t number = section.first_line;
  while (!rest.empty()) {
    std::size_t end = rest.find('\n');
    std::string_view line = rest.substr(0, end);
    if (!trim(line).empty() && !is_comment(line)) out.push_back({number, trim(line)});
    if (end == std::string_view::npos) break;
    rest.remove_prefix(end + 1);
    ++number;
  }
  return out;
}

std::vector<std::string> words(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

std::string first_word(std::string_view s) {
  s = trim(s);
  std::size_t end = 0;
  while (end < s.size() && !std::isspace(static_cast<unsigned char>(s[end]))) ++end;
  return std::string(s.substr(0, end));
}

[[noreturn]] void fail(const Section& section, std::size_t line, const std::string& rule) {
  throw FormatError(section.source, line, rule);
}

std::size_t parse_count(const Section& section, std::size_t line, const std::string& word, const std::string& what) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), value);
  if (ec != std::errc() || ptr != word.data() + word.size())
    fail(section, line, what + " must be a nonnegative decimal integer, got '" + word + "'");
  return value;
}

// Parses "(e1,...,ek) (..) ..." into tuples.
std::vector<Tuple> parse_tuple_list(const Section& section, std::size_t line, std::string_view s) {
  std::vector<Tuple> out;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  };
  const std::string rule = "tuples are written (e1,...,ek) with decimal elements";
  for (skip(); i < s.size(); skip()) {
    if (s[i] != '(') fail(section, line, rule);
    ++i;
    Tuple t;
    for (;;) {
      skip();
      std::size_t start = i;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      if (start == i) fail(section, line, rule);
      Element e = 0;
      auto [ptr, ec] = std::from_chars(s.data() + start, s.data() + i, e);
      if (ec != std::errc() || ptr != s.data() + i) fail(section, line, rule);
      t.push_back(e);
      skip();
      if (i < s.size() && s[i] == ',') {
        ++i;
        continue;
      }
      if (i < s.size() && s[i] == ')') {
        ++i;
        break;
      }
      fail(section, line, rule);
    }
    out.push_back(std::move(t));
  }
  return out;
}

// Parses "(a b) (c d)" into variable groups.
std::vector<std::vector<std::string>> parse_slots(const Section& section, std::size_t line, std::string_view s) {
  std::vector<std::vector<std::string>> out;
  std::size_t i = 0;
  const std::string rule = "slots are written (v ...) (v ...)";
  while (i < s.size()) {
    if (std::isspace(static_cast<unsigned char>(s[i]))) {
      ++i;
      continue;
    }
    if (s[i] != '(') fail(section, line, rule);
    std::size_t close = s.find(')', i);
    if (close == std::string_view::npos) fail(section, line, rule);
    auto group = words(s.substr(i + 1, close - i - 1));
    if (group.empty()) fail(section, line, rule);
    for (const auto& v : group)
      if (!is_valid_symbol_name(v)) fail(section, line, "invalid variable name '" + v + "'");
    out.push_back(std::move(group));
    i = close + 1;
  }
  return out;
}

std::optional<SectionKind> header_kind(std::string_view line) {
  std::string w = first_word(line);
  if (w == "language") return SectionKind::Language;
  if (w == "structure") return SectionKind::Structure;
  if (w == "formula") return SectionKind::Formula;
  if (w == "array") return SectionKind::Array;
  if (w == "tuples") return SectionKind::Tuples;
  return std::nullopt;
}

}  // namespace

// ---------------------------------------------------------------------------
// Sections

std::vector<Section> split_sections(std::string_view text, const std::string& source) {
  std::vector<Section> out;
  std::size_t number = 1;
  std::string_view rest = text;
  while (!rest.empty()) {
    std::size_t end = rest.find('\n');
    std::string_view line = rest.substr(0, end);
    if (!is_comment(line)) {
      if (auto kind = header_kind(line)) {
        out.push_back({*kind, source, number, {}});
      } else if (out.empty() && !trim(line).empty()) {
        out.push_back({SectionKind::Formula, source, number, {}});
      }
    }
    if (!out.empty()) {
      out.back().text.append(line);
      out.back().text.push_back('\n');
    }
    if (end == std::string_view::npos) break;
    rest.remove_prefix(end + 1);
    ++number;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Languages

Language read_language(const Section& section) {
  auto lines = content_lines(section);
  if (lines.empty()) fail(section, section.first_line, "empty language section");
  auto head = words(lines[0].text);
  if (head.size() != 2 || head[0] != "language") fail(section, lines[0].number, "expected 'language <name>'");
  std::vector<std::string> constants;
  std::vector<PredicateSymbol> preds;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto w = words(lines[i].text);
    if (w[0] == "const") {
      if (w.size() != 2) fail(section, lines[i].number, "expected 'const <name>'");
      constants.push_back(w[1]);
    } else if (w[0] == "pred") {
      if (w.size() != 3) fail(section, lines[i].number, "expected 'pred <name> <arity>'");
      std::size_t arity = parse_count(section, lines[i].number, w[2], "arity");
      if (arity == 0) fail(section, lines[i].number, "predicate arity must be positive");
      preds.push_back({w[1], arity});
    } else {
      fail(section, lines[i].number, "expected a 'const' or 'pred' line");
    }
    if (!is_valid_symbol_name(w[1])) fail(section, lines[i].number, "invalid symbol name '" + w[1] + "'");
  }
  try {
    return Language(head[1], std::move(constants), std::move(preds));
  } catch (const Error& e) {
    fail(section, lines[0].number, e.what());
  }
}

std::string write_language(const Language& lang) {
  std::string out = "language " + lang.name() + "\n";
  for (const auto& c : lang.constants()) out += "const " + c + "\n";
  for (const auto& p : lang.predicates()) out += "pred " + p.name + " " + std::to_string(p.arity) + "\n";
  return out;
}

std::string write_sim_language(const SimLanguage& sl) {
  std::string out = write_language(sl.base());
  out += "# factors " + sl.factor(Factor::First).name() + " " + sl.factor(Factor::Second).name() + "\n";
  for (const auto& p : sl.base().predicates())
    out += std::string("# tag ") + p.name + " " + tag_name(sl.tag(p.name)) + "\n";
  return out;
}

std::optional<std::pair<std::string, std::string>> sim_factor_names(const Section& section) {
  std::istringstream in(section.text);
  std::string line;
  while (std::getline(in, line)) {
    auto w = words(line);
    if (w.size() == 4 && w[0] == "#" && w[1] == "factors") return std::pair{w[2], w[3]};
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Structures

namespace {

struct StructureHeader {
  std::string name;
  std::string language;
  std::size_t size;
  std::size_t line;
};

StructureHeader structure_header(const Section& section) {
  auto lines = content_lines(section);
  if (lines.empty()) fail(section, section.first_line, "empty structure section");
  auto w = words(lines[0].text);
  if (w.size() != 6 || w[0] != "structure" || w[2] != "over" || w[4] != "size")
    fail(section, lines[0].number, "expected 'structure <name> over <language> size <n>'");
  std::size_t size = parse_count(section, lines[0].number, w[5], "size");
  if (size == 0) fail(section, lines[0].number, "structure size must be positive");
  return {w[1], w[3], size, lines[0].number};
}

}  // namespace

std::string structure_language_name(const Section& section) { return structure_header(section).language; }

FiniteStructure read_structure(const Section& section, const Language& lang) {
  StructureHeader head = structure_header(section);
  if (head.language != lang.name())
    fail(section, head.line, "structure is declared over '" + head.language + "' but language '" + lang.name() +
                                 "' was supplied");
  auto lines = content_lines(section);
  StructureBuilder b = [&] {
    try {
      return StructureBuilder(lang, head.size, head.name);
    } catch (const Error& e) {
      fail(section, head.line, e.what());
    }
  }();
  std::set<std::string> assigned;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& [number, text] = lines[i];
    auto w = words(text);
    try {
      if (w[0] == "const") {
        if (w.size() != 4 || w[2] != "=") fail(section, number, "expected 'const <name> = <element>'");
        if (!assigned.insert(w[1]).second) fail(section, number, "constant '" + w[1] + "' interpreted twice");
        b.constant(w[1], static_cast<Element>(parse_count(section, number, w[3], "element")));
      } else if (w[0] == "pred") {
        std::string_view rest = trim(text.substr(4));
        std::size_t colon = rest.find(':');
        if (colon == std::string_view::npos) fail(section, number, "expected 'pred <name>: (e1,...,ek) ...'");
        std::string name(trim(rest.substr(0, colon)));
        if (!lang.has_predicate(name)) fail(section, number, "unknown predicate '" + name + "'");
        for (const auto& t : parse_tuple_list(section, number, rest.substr(colon + 1))) {
          if (t.size() != lang.arity(name))
            fail(section, number, "tuple " + format_tuple(t) + " does not match the arity of '" + name + "'");
          b.tuple(name, t);
        }
      } else {
        fail(section, number, "expected a 'const' or 'pred' line");
      }
    } catch (const FormatError&) {
      throw;
    } catch (const Error& e) {
      fail(section, number, e.what());
    }
  }
  try {
    return b.build();
  } catch (const Error& e) {
    fail(section, head.line, e.what());
  }
}

std::string write_structure(const FiniteStructure& s) {
  const Language& lang = s.language();
  std::string out =
      "structure " + s.name() + " over " + lang.name() + " size " + std::to_string(s.size()) + "\n";
  for (std::size_t i = 0; i < lang.constants().size(); ++i)
    out += "const " + lang.constants()[i] + " = " + std::to_string(s.constants()[i]) + "\n";
  for (std::size_t i = 0; i < lang.predicates().size(); ++i) {
    out += "pred " + lang.predicates()[i].name + ":";
    for (const auto& t : s.relations()[i].tuples()) out += " " + format_tuple(t);
    out += "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Formulas

Formula FormulaEntry::parse(const Language& lang) const {
  try {
    return parse_formula(text, lang);
  } catch (const Error& e) {
    throw FormatError(source, line, std::string("formula: ") + e.what());
  }
}

PartitionedFormula FormulaEntry::partitioned(const Language& lang) const {
  Formula f = parse(lang);
  PartitionedFormula pf{f, objects.value_or(std::vector<std::string>{}), params.value_or(std::vector<std::string>{})};
  if (!objects) {
    // Default: the first free variable is the object, the rest are parameters.
    auto fv = free_variables(f);
    if (!fv.empty()) {
      pf.objects = {fv.front()};
      pf.params.assign(fv.begin() + 1, fv.end());
    }
  }
  try {
    pf.validate();
  } catch (const Error& e) {
    throw FormatError(source, line, e.what());
  }
  return pf;
}

SequenceFormula FormulaEntry::sequence_formula(const Language& lang) const {
  Formula f = parse(lang);
  if (!slots) throw FormatError(source, line, "formula used on sequences needs a 'slots' directive");
  SequenceFormula sf{f, *slots, params.value_or(std::vector<std::string>{})};
  std::set<std::string> declared(sf.params.begin(), sf.params.end());
  for (const auto& slot : sf.slots) declared.insert(slot.begin(), slot.end());
  for (const auto& v : free_variables(f))
    if (!declared.count(v)) throw FormatError(source, line, "free variable '" + v + "' is neither a slot nor a parameter");
  return sf;
}

std::vector<FormulaEntry> read_formula_entries(const Section& section) {
  std::vector<FormulaEntry> out;
  FormulaEntry pending;
  pending.source = section.source;
  std::string current;
  std::size_t current_line = 0;
  int depth = 0;

  auto finish = [&] {
    FormulaEntry e = pending;
    e.text = current;
    e.line = current_line;
    out.push_back(std::move(e));
    current.clear();
  };

  bool first = true;
  for (const auto& [number, text] : content_lines(section)) {
    std::string key = first_word(text);
    if (depth == 0 && current.empty()) {
      auto w = words(text);
      if (key == "formula") {
        if (!first) fail(section, number, "'formula' header must open the section");
        if (w.size() > 2) fail(section, number, "expected 'formula [<name>]'");
        first = false;
        continue;
      }
      if (key == "objects" || key == "params") {
        std::vector<std::string> vars(w.begin() + 1, w.end());
        for (const auto& v : vars)
          if (!is_valid_symbol_name(v)) fail(section, number, "invalid variable name '" + v + "'");
        (key == "objects" ? pending.objects : pending.params) = std::move(vars);
        first = false;
        continue;
      }
      if (key == "slots") {
        pending.slots = parse_slots(section, number, trim(text).substr(5));
        first = false;
        continue;
      }
    }
    first = false;
    // Split the line into top-level formulas.
    for (std::size_t i = 0; i < text.size(); ++i) {
      char ch = text[i];
      if (depth == 0 && current.empty()) {
        if (std::isspace(static_cast<unsigned char>(ch))) continue;
        current_line = number;
      }
      if (ch == '(') {
        ++depth;
        current.push_back(ch);
      } else if (ch == ')') {
        if (depth == 0) fail(section, number, "unbalanced ')'");
        current.push_back(ch);
        if (--depth == 0) finish();
      } else if (depth == 0 && !std::isspace(static_cast<unsigned char>(ch))) {
        // A bare word such as true or false.
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) && text[i] != '(' &&
               text[i] != ')')
          current.push_back(text[i++]);
        --i;
        finish();
      } else {
        current.push_back(ch);
      }
    }
    if (depth > 0) current.push_back(' ');
  }
  if (depth > 0) fail(section, current_line, "unbalanced '(' at end of formula");
  return out;
}

std::string write_formula(const Formula& f, const std::string& name) {
  std::string out = name.empty() ? "formula\n" : "formula " + name + "\n";
  return out + render_formula(f) + "\n";
}

std::string write_partitioned(const PartitionedFormula& pf, const std::string& name) {
  std::string out = name.empty() ? "formula\n" : "formula " + name + "\n";
  out += "objects";
  for (const auto& v : pf.objects) out += " " + v;
  out += "\nparams";
  for (const auto& v : pf.params) out += " " + v;
  return out + "\n" + render_formula(pf.formula) + "\n";
}

// ---------------------------------------------------------------------------
// Arrays

Tp2Array read_array(const Section& section) {
  auto lines = content_lines(section);
  if (lines.empty()) fail(section, section.first_line, "empty array section");
  auto head = words(lines[0].text);
  if (head.size() != 4 || head[0] != "array") fail(section, lines[0].number, "expected 'array <n> <m> <k>'");
  Tp2Array arr;
  arr.rows = parse_count(section, lines[0].number, head[1], "row count");
  arr.cols = parse_count(section, lines[0].number, head[2], "column count");
  arr.k = parse_count(section, lines[0].number, head[3], "k");
  if (arr.k == 0) fail(section, lines[0].number, "k must be at least 1");
  std::vector<std::vector<bool>> seen(arr.rows, std::vector<bool>(arr.cols));
  arr.cells.assign(arr.rows, std::vector<Tuple>(arr.cols));
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& [number, text] = lines[i];
    auto w = words(text);
    std::size_t eq = text.find('=');
    if (w.size() < 5 || w[0] != "cell" || w[3] != "=" || eq == std::string_view::npos)
      fail(section, number, "expected 'cell <t> <i> = (e,...)'");
    std::size_t t = parse_count(section, number, w[1], "row index");
    std::size_t c = parse_count(section, number, w[2], "column index");
    if (t >= arr.rows || c >= arr.cols) fail(section, number, "cell index outside the declared array shape");
    if (seen[t][c]) fail(section, number, "cell given twice");
    auto tuples = parse_tuple_list(section, number, text.substr(eq + 1));
    if (tuples.size() != 1) fail(section, number, "a cell holds exactly one tuple");
    arr.cells[t][c] = tuples[0];
    seen[t][c] = true;
  }
  for (std::size_t t = 0; t < arr.rows; ++t)
    for (std::size_t c = 0; c < arr.cols; ++c)
      if (!seen[t][c])
        fail(section, lines[0].number, "cell " + std::to_string(t) + " " + std::to_string(c) + " is missing");
  return arr;
}

std::string write_array(const Tp2Array& arr, const std::vector<std::string>& comments) {
  std::string out =
      "array " + std::to_string(arr.rows) + " " + std::to_string(arr.cols) + " " + std::to_string(arr.k) + "\n";
  for (const auto& c : comments) out += "# " + c + "\n";
  for (std::size_t t = 0; t < arr.rows; ++t)
    for (std::size_t i = 0; i < arr.cols; ++i)
      out += "cell " + std::to_string(t) + " " + std::to_string(i) + " = " + format_tuple(arr.cells[t][i]) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Tuple lists

std::vector<std::vector<Tuple>> TupleSection::all(const std::string& keyword) const {
  std::vector<std::vector<Tuple>> out;
  for (const auto& [k, list] : lists)
    if (k == keyword) out.push_back(list);
  return out;
}

const std::vector<Tuple>& TupleSection::one(const std::string& keyword) const {
  const std::vector<Tuple>* found = nullptr;
  for (const auto& [k, list] : lists) {
    if (k != keyword) continue;
    if (found) throw Error("tuple list '" + keyword + "' given more than once");
    found = &list;
  }
  if (!found) throw Error("tuple list '" + keyword + "' is missing");
  return *found;
}

TupleSection read_tuples(const Section& section) {
  TupleSection out;
  bool first = true;
  for (const auto& [number, text] : content_lines(section)) {
    std::string key = first_word(text);
    if (key == "tuples") {
      if (!first || words(text).size() != 1) fail(section, number, "'tuples' header must stand alone on the first line");
    } else if (key == "params") {
      for (const auto& w : words(text.substr(6)))
        out.params.push_back(static_cast<Element>(parse_count(section, number, w, "parameter element")));
    } else if (!key.empty() && is_valid_symbol_name(key)) {
      out.lists.emplace_back(key, parse_tuple_list(section, number, text.substr(key.size())));
    } else {
      fail(section, number, "expected '<keyword> (e,...) ...' or 'params e ...'");
    }
    first = false;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Workspace

std::string read_text_file(const std::string& path) {
  if (path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void Workspace::load(std::string_view text, const std::string& source) {
  auto sections = split_sections(text, source);
  if (sections.empty()) throw FormatError(source, 1, "file has no content");
  sections_.insert(sections_.end(), sections.begin(), sections.end());
}

void Workspace::load_file(const std::string& path) { load(read_text_file(path), path == "-" ? "<stdin>" : path); }

std::vector<const Section*> Workspace::sections_of(SectionKind kind) const {
  std::vector<const Section*> out;
  for (const auto& s : sections_)
    if (s.kind == kind) out.push_back(&s);
  return out;
}

const Section& Workspace::only(SectionKind kind, const char* what) const {
  auto found = sections_of(kind);
  if (found.empty()) throw Error(std::string("no ") + what + " given");
  if (found.size() > 1)
    throw FormatError(found[1]->source, found[1]->first_line, std::string("more than one ") + what + " given");
  return *found.front();
}

Language Workspace::language(const std::string& name) const {
  for (const Section* s : sections_of(SectionKind::Language)) {
    Language lang = read_language(*s);
    if (lang.name() == name) return lang;
  }
  throw Error("language '" + name + "' not given");
}

FiniteStructure Workspace::structure() const {
  const Section& s = only(SectionKind::Structure, "structure");
  return read_structure(s, language(structure_language_name(s)));
}

SimLanguage Workspace::sim_language(const std::string& base_name) const {
  for (const Section* s : sections_of(SectionKind::Language)) {
    if (read_language(*s).name() != base_name) continue;
    auto names = sim_factor_names(*s);
    if (!names) throw FormatError(s->source, s->first_line, "language '" + base_name + "' does not record its factors");
    // Equal factor names resolve to the first and second declarations.
    std::vector<Language> matches1, matches2;
    for (const Section* t : sections_of(SectionKind::Language)) {
      Language l = read_language(*t);
      if (l.name() == names->first) matches1.push_back(l);
      if (l.name() == names->second) matches2.push_back(l);
    }
    if (matches1.empty()) throw Error("factor language '" + names->first + "' not given");
    std::size_t second = names->first == names->second ? 1 : 0;
    if (matches2.size() <= second) throw Error("factor language '" + names->second + "' not given");
    SimLanguage sl = build_sim_language(matches1.front(), matches2[second]);
    if (!(sl.base() == read_language(*s)))
      throw FormatError(s->source, s->first_line, "language '" + base_name + "' is not the product of its factors");
    return sl;
  }
  throw Error("language '" + base_name + "' not given");
}

SimLanguage Workspace::sim_language() const {
  std::optional<std::string> name;
  for (const Section* s : sections_of(SectionKind::Language)) {
    if (!sim_factor_names(*s)) continue;
    if (name) throw Error("more than one product language given");
    name = read_language(*s).name();
  }
  if (!name) throw Error("no product language given");
  return sim_language(*name);
}

std::vector<FormulaEntry> Workspace::formulas() const {
  std::vector<FormulaEntry> out;
  for (const Section* s : sections_of(SectionKind::Formula)) {
    auto entries = read_formula_entries(*s);
    out.insert(out.end(), entries.begin(), entries.end());
  }
  return out;
}

Tp2Array Workspace::array() const { return read_array(only(SectionKind::Array, "array")); }

TupleSection Workspace::tuples() const { return read_tuples(only(SectionKind::Tuples, "tuple section")); }

}  // namespace simprod
