#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tol {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands of a zone operation disagree on dimension, or a constraint names a
/// clock index outside the matrix.
class ArityError : public Error {
 public:
  using Error::Error;
};

/// Unknown location or clock name.
class LookupError : public Error {
 public:
  using Error::Error;
};

/// Diagnostic codes for model files. Each code maps to exactly one fixture in
/// tests/fixtures/errors.
enum class ModelDiag {
  syntax,                 // E01
  undeclared_clock,       // E02
  missing_initial,        // E03
  multiple_initial,       // E04
  invariant_lower_bound,  // E05
  unknown_location,       // E06
  duplicate_location,     // E07
  unsatisfiable_invariant,// E08
  duplicate_clock,        // E09
};

std::string diag_code(ModelDiag d);

class ModelError : public Error {
 public:
  ModelError(ModelDiag diag, std::size_t line, std::size_t column, const std::string& what);

  ModelDiag diag() const noexcept { return diag_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  ModelDiag diag_;
  std::size_t line_;
  std::size_t column_;
};

/// Malformed formula text or a shadowed freeze binder.
class FormulaError : public Error {
 public:
  FormulaError(std::size_t column, const std::string& what);
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

/// A formula outside the grade-0 fragment was handed to the TCTL translation.
class FragmentError : public Error {
 public:
  using Error::Error;
};

/// A formula does not bind against a model: unbound clock atom, or a freeze
/// identifier colliding with an automaton clock.
class BindingError : public Error {
 public:
  using Error::Error;
};

/// The explicit-state reference exceeded its configured state cap.
class OracleScaleError : public Error {
 public:
  using Error::Error;
};

}  // namespace tol
