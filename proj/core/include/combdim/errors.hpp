#ifndef COMBDIM_ERRORS_HPP
#define COMBDIM_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace combdim {

// Base of everything the library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller violated a documented precondition (bad scale, size mismatch, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Malformed input file or JSON document.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Data violates a type invariant. Carries the offending position when known.
class InvariantViolation : public Error {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  InvariantViolation(const std::string& what, std::size_t row = npos, std::size_t column = npos)
      : Error(what), row_(row), column_(column) {}

  std::size_t row() const { return row_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

// An exact search refused to run (or gave up) because it would exceed its budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

// A proved inequality or certificate failed when re-checked.
class AssertionFailure : public Error {
 public:
  AssertionFailure(std::string stage, const std::string& what)
      : Error(stage + ": " + what), stage_(std::move(stage)) {}

  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

}  // namespace combdim

#endif  // COMBDIM_ERRORS_HPP
