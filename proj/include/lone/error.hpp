#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lone {

/// Base class for every error raised by the library. Data problems (bad
/// input files, impossible tasks) derive from this; programming errors use
/// std::invalid_argument.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input. `line()` is 1-based, 0 when not applicable.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace lone
