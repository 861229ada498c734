#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mahler {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed polynomial or matrix text. `position()` is the 0-based byte
/// offset where the parser gave up.
class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

private:
  std::size_t position_;
};

class DimensionError : public Error {
public:
  using Error::Error;
};

/// Raised by measure and experiment operations: zero polynomials, a method
/// that does not apply to the input, root iteration that did not converge.
class ComputationError : public Error {
public:
  using Error::Error;
};

}  // namespace mahler
