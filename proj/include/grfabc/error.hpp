#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace grfabc {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller supplied something that violates a documented precondition.
/// The CLI maps this to exit code 2.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// An input file could not be parsed. Carries the 1-based line number.
class ParseError : public InvalidInput {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : InvalidInput(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// An estimator is undefined for the counts it was given (for example no
/// accepted samples, or a zero denominator for the plug-in Bayes factor).
class NoEstimate : public Error {
 public:
  using Error::Error;
};

}  // namespace grfabc
