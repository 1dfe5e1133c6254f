#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mucalc {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed formula, ordinal or model text. `offset` is a byte offset into
// the input, or npos when the error is not tied to a location.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset = npos)
      : Error(offset == npos ? what : what + " at offset " + std::to_string(offset)),
        offset_(offset) {}

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

// Structurally invalid Kripke model (unknown state, empty state set, ...).
class ModelError : public Error {
 public:
  using Error::Error;
};

// Precondition violation of an evaluation or game operation.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace mucalc
