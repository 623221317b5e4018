#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bstri {

enum class ErrorKind {
  NotCoprime,
  NotPrime,
  PreconditionViolated,
  NotADivisor,
  UnmappedGenerator,
  UndeclaredGenerator,
  Parse,
  IncompleteTable,
  NotRegular,
  DegreeLimitExceeded,
  Usage,
};

std::string_view to_string(ErrorKind kind);

// Every recoverable failure in the library surfaces as this exception.
// Exhausted limits and exponent overflow are reported in-band instead.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Parse failures carry the byte offset of the offending character.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(ErrorKind::Parse, what + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace bstri
