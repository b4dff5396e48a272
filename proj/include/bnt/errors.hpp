#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bnt {

/// Precondition or argument violations. CLI maps these to exit code 2.
using DomainError = std::invalid_argument;

/// Enumeration exceeded its configured path budget. Carries the number of
/// paths emitted before the budget tripped. CLI exit code 3.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(std::string what, std::size_t partial_count)
      : std::runtime_error(std::move(what)), partial_count_(partial_count) {}
  std::size_t partial_count() const { return partial_count_; }

 private:
  std::size_t partial_count_;
};

/// Problem size exceeds a hard implementation ceiling (node-id space,
/// brute-force search limits). CLI exit code 2.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file. Carries a 1-based line number when known.
/// CLI exit code 4.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string what, std::size_t line = 0)
      : std::runtime_error(std::move(what)), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace bnt
