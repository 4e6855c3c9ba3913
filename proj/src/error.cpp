#include "tol/error.hpp"

#include <cstdio>

namespace tol {

std::string diag_code(ModelDiag d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "E%02d", static_cast<int>(d) + 1);
  return buf;
}

ModelError::ModelError(ModelDiag diag, std::size_t line, std::size_t column,
                       const std::string& what)
    : Error(diag_code(diag) + " (" + std::to_string(line) + ":" + std::to_string(column) +
            "): " + what),
      diag_(diag),
      line_(line),
      column_(column) {}

FormulaError::FormulaError(std::size_t column, const std::string& what)
    : Error("formula error at column " + std::to_string(column) + ": " + what), column_(column) {}

}  // namespace tol
