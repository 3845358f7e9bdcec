#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace epos {

/// Invalid input or configuration supplied by the caller (CLI exit code 2).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed serialized input; carries the byte offset of the first bad byte.
class ParseError : public ValidationError {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : ValidationError(what + " (at byte offset " + std::to_string(offset) + ")"), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// A broken internal invariant: overflow, nonzero residual, divergence (CLI exit code 1).
class InternalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace epos
