#pragma once

#include <stdexcept>
#include <string>

namespace zubov {

/// Invalid arguments: dimension mismatches, out-of-range values, bad shapes.
class ArgumentError : public std::invalid_argument {
 public:
  explicit ArgumentError(const std::string& what) : std::invalid_argument(what) {}
};

/// A computation produced non-finite values.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed text input (config, grid, checkpoint); carries the line number
/// when one is known.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what, int line = 0)
      : std::runtime_error(format(what, line)), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  static std::string format(const std::string& what, int line) {
    if (line <= 0) return what;
    return "line " + std::to_string(line) + ": " + what;
  }
  int line_ = 0;
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace zubov
