#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qrde {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Operation called on an object in a state it does not accept
/// (e.g. evaluating a histogram that contains degenerate bins).
class UsageError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// Iterative evaluation failed to converge or produced a non-finite value.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed sample input, located by 1-based line or, for type errors in a
/// JSON array, by 1-based element index.
class ParseError : public std::runtime_error {
public:
  struct Element {
    std::size_t index;
  };

  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  ParseError(Element element, const std::string& what)
      : std::runtime_error("element " + std::to_string(element.index) + ": " + what),
        element_(element.index) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t element() const noexcept { return element_; }

private:
  std::size_t line_ = 0;
  std::size_t element_ = 0;
};

}  // namespace qrde
