#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cqarank {

/// Bad user input: malformed files, inconsistent configuration, schema
/// mismatches. The CLI maps these to exit code 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Syntax error in a text input, with a 1-based source location.
/// `column` is 0 when only the line is known.
class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column = 0)
      : InputError(format(what, line, column)), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  static std::string format(const std::string& what, std::size_t line,
                            std::size_t column) {
    std::string loc = "line " + std::to_string(line);
    if (column > 0) loc += ", column " + std::to_string(column);
    return loc + ": " + what;
  }

  std::size_t line_;
  std::size_t column_;
};

class ConfigError : public InputError {
 public:
  using InputError::InputError;
};

/// Feature layout or model file does not match what the caller expects.
class SchemaError : public InputError {
 public:
  using InputError::InputError;
};

}  // namespace cqarank
