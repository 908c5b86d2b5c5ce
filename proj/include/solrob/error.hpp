#ifndef SOLROB_ERROR_HPP
#define SOLROB_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace solrob {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: a network, flow or model that breaks a structural invariant.
/// Distinct from infeasibility, which is reported as a value.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Text input that cannot be parsed. Carries a 1-based line and column.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Bad configuration (unknown backend, invalid parameters).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Floating point breakdown inside the simplex.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// An exhaustive search would exceed its enumeration budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

/// The optimization problem has no finite optimum.
class UnboundedError : public Error {
 public:
  using Error::Error;
};

/// A problem that must be feasible (such as the nominal instance) is not.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

}  // namespace solrob

#endif  // SOLROB_ERROR_HPP
