#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace blendkit {

/// Malformed input: a morphism that is not a map, a sentence over the wrong
/// signature, an algebra whose tables are not total.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operation was called outside its precondition (e.g. a pullback along
/// an arrow that is not an abstract inclusion).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A bounded enumeration would exceed its configured cap.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Lexical, syntax, resolution and typecheck failures of the input language.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) +
                           ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace blendkit
