#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stochmatch {

// Invalid arguments or malformed graphs.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An exhaustive computation would exceed its configured size limit.
class BudgetError : public std::runtime_error {
 public:
  BudgetError(const std::string& what, std::size_t requested, std::size_t limit)
      : std::runtime_error(what + " (requested " + std::to_string(requested) +
                           ", limit " + std::to_string(limit) + ")"),
        requested_(requested),
        limit_(limit) {}

  std::size_t requested() const noexcept { return requested_; }
  std::size_t limit() const noexcept { return limit_; }

 private:
  std::size_t requested_;
  std::size_t limit_;
};

// Graph file syntax or content errors; carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace stochmatch
