#pragma once

// Text formats. A file is a sequence of sections, each opened by a header
// line; a bundle is several sections concatenated.
//
//   language <name>                    const <name> / pred <name> <arity>
//   structure <name> over <lang> size <n>
//                                      const <name> = <e> / pred <name>: (e,...) ...
//   formula [<name>]                   objects / params / slots directives,
//                                      then formulas in the s-expression grammar
//   array <n> <m> <k>                  cell <t> <i> = (e,...)
//   tuples                             <keyword> (e,...) ... / params e e ...
//
// Lines whose first non-blank character is '#', and report lines starting
// with "RESULT ", are comments. A file without a header is read as a formula
// section.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "simprod/dividing_lines.hpp"
#include "simprod/logic.hpp"
#include "simprod/product.hpp"
#include "simprod/structure.hpp"

namespace simprod {

enum class SectionKind { Language, Structure, Formula, Array, Tuples };

struct Section {
  SectionKind kind;
  std::string source;
  /// 1-based line number of the first line of `text` in the source.
  std::size_t first_line = 1;
  std::string text;
};

std::vector<Section> split_sections(std::string_view text, const std::string& source);

Language read_language(const Section& section);
std::string write_language(const Language& lang);

/// The base language followed by "# factors <l1> <l2>" and one
/// "# tag <pred> <Factor1|Factor2|Sim1|Sim2>" line per predicate.
std::string write_sim_language(const SimLanguage& sl);
/// Factor language names recorded by write_sim_language, if present.
std::optional<std::pair<std::string, std::string>> sim_factor_names(const Section& section);

/// Name of the language a structure section is declared over.
std::string structure_language_name(const Section& section);
FiniteStructure read_structure(const Section& section, const Language& lang);
std::string write_structure(const FiniteStructure& s);

/// One formula of a formula section with the directives in force for it.
struct FormulaEntry {
  std::string text;
  std::string source;
  std::size_t line = 0;
  std::optional<std::vector<std::string>> objects;
  std::optional<std::vector<std::string>> params;
  std::optional<std::vector<std::vector<std::string>>> slots;

  /// Throws FormatError naming the entry's line on syntax or symbol errors.
  Formula parse(const Language& lang) const;
  PartitionedFormula partitioned(const Language& lang) const;
  SequenceFormula sequence_formula(const Language& lang) const;
};

/// Directives persist until overridden; "formula" headers reset them.
std::vector<FormulaEntry> read_formula_entries(const Section& section);
std::string write_formula(const Formula& f, const std::string& name = {});
std::string write_partitioned(const PartitionedFormula& pf, const std::string& name = {});

Tp2Array read_array(const Section& section);
std::string write_array(const Tp2Array& arr, const std::vector<std::string>& comments = {});

struct TupleSection {
  /// Tuple lists by keyword, in file order for repeated keywords.
  std::vector<std::pair<std::string, std::vector<Tuple>>> lists;
  std::vector<Element> params;

  std::vector<std::vector<Tuple>> all(const std::string& keyword) const;
  /// The single list for `keyword`; throws Error if absent or repeated.
  const std::vector<Tuple>& one(const std::string& keyword) const;
};

TupleSection read_tuples(const Section& section);

/// Everything loaded from a set of input files.
class Workspace {
 public:
  void load(std::string_view text, const std::string& source);
  void load_file(const std::string& path);

  const std::vector<Section>& sections() const { return sections_; }
  std::vector<const Section*> sections_of(SectionKind kind) const;

  /// The language named `name`; throws Error if not loaded.
  Language language(const std::string& name) const;
  /// The only structure section, parsed over its declared language.
  FiniteStructure structure() const;
  /// The product language a structure's language records via "# factors".
  SimLanguage sim_language(const std::string& base_name) const;
  /// The only language carrying "# factors".
  SimLanguage sim_language() const;
  std::vector<FormulaEntry> formulas() const;
  Tp2Array array() const;
  TupleSection tuples() const;

 private:
  const Section& only(SectionKind kind, const char* what) const;
  std::vector<Section> sections_;
};

std::string read_text_file(const std::string& path);

}  // namespace simprod
