#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace simprod {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed formula text. `position()` is a byte offset into the input.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, std::size_t position)
      : Error(what + " at offset " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class UnknownSymbolError : public Error {
 public:
  using Error::Error;
};

class ArityError : public Error {
 public:
  using Error::Error;
};

/// A line of an input file violates its format.
class FormatError : public Error {
 public:
  FormatError(const std::string& source, std::size_t line, const std::string& rule)
      : Error(source + ":" + std::to_string(line) + ": " + rule),
        source_(source),
        line_(line) {}
  const std::string& source() const { return source_; }
  std::size_t line() const { return line_; }

 private:
  std::string source_;
  std::size_t line_;
};

/// A structure violates an axiom that an operation requires as a hypothesis.
class AxiomViolation : public Error {
 public:
  AxiomViolation(const std::string& axiom, const std::string& detail)
      : Error("axiom violated: " + axiom + (detail.empty() ? "" : " (" + detail + ")")),
        axiom_(axiom) {}
  const std::string& axiom() const { return axiom_; }

 private:
  std::string axiom_;
};

}  // namespace simprod
