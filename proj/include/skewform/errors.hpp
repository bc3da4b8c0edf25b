#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace skewform {

/// Bad user input: out-of-range generator, mismatched contexts, invalid
/// matrices, non-quadratic expressions.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A parse failure at a character offset (0-based) in the source text.
class ParseError : public InputError {
 public:
  ParseError(std::size_t position, const std::string& message)
      : InputError("parse error at position " + std::to_string(position) + ": " + message),
        position_(position) {}

  [[nodiscard]] std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// A constructed witness failed re-expansion. Signals a bug.
class VerificationError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace skewform
