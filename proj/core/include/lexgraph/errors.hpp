#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lexgraph {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input record. `line()` is 1-based; 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class DuplicateError : public Error {
 public:
  using Error::Error;
};

/// Raised by close_lexicon in error-unknown mode.
class ClosureError : public Error {
 public:
  ClosureError(std::string entry, std::string token)
      : Error("entry '" + entry + "' uses undefined word '" + token + "'"),
        entry_(std::move(entry)),
        token_(std::move(token)) {}
  const std::string& entry() const noexcept { return entry_; }
  const std::string& token() const noexcept { return token_; }

 private:
  std::string entry_;
  std::string token_;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// An internal consistency check failed. Always a bug.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

/// Lookup of an unknown session or resource.
class NotFoundError : public Error {
 public:
  using Error::Error;
};

}  // namespace lexgraph
