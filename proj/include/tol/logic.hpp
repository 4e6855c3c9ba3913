#pragma once

// TOL formulas: AST, parser, printer, structural queries, and the grade-0
// translation to TCTL.
//
// Formulas are immutable trees with shared subterms. The AST only holds the
// core connectives; `false`, `|`, `->`, F, G and W are expanded while
// parsing (or by the corresponding factory).

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "tol/dbm.hpp"

namespace tol {

enum class FormulaKind { True, Atom, ClockAtom, Not, And, Until, Release, Freeze };

class TolFormula {
 public:
  static TolFormula truth();
  static TolFormula atom(std::string name);
  static TolFormula clock_atom(std::string clock, CmpOp op, std::int32_t constant);
  static TolFormula negate(TolFormula f);
  static TolFormula conj(TolFormula a, TolFormula b);
  static TolFormula until(std::uint32_t grade, TolFormula a, TolFormula b);
  static TolFormula release(std::uint32_t grade, TolFormula a, TolFormula b);
  static TolFormula freeze(std::string clock, TolFormula body);

  static TolFormula falsity();
  static TolFormula disj(TolFormula a, TolFormula b);
  static TolFormula implies(TolFormula a, TolFormula b);
  static TolFormula finally(std::uint32_t grade, TolFormula f);
  static TolFormula globally(std::uint32_t grade, TolFormula f);
  static TolFormula weak_until(std::uint32_t grade, TolFormula a, TolFormula b);

  FormulaKind kind() const { return node_->kind; }
  /// Proposition, clock, or freeze identifier, depending on kind.
  const std::string& name() const { return node_->name; }
  CmpOp op() const { return node_->op; }
  std::int32_t constant() const { return node_->constant; }
  std::uint32_t grade() const { return node_->grade; }
  /// Operand of Not/Freeze, left operand of And/Until/Release.
  const TolFormula& lhs() const { return node_->children.at(0); }
  const TolFormula& rhs() const { return node_->children.at(1); }
  /// Connective count.
  std::size_t size() const { return node_->size; }
  /// Fully parenthesized text; parse_formula(str()) == *this.
  const std::string& str() const { return node_->text; }

  bool operator==(const TolFormula& o) const { return node_ == o.node_ || str() == o.str(); }

 private:
  struct Node {
    FormulaKind kind = FormulaKind::True;
    std::string name;
    CmpOp op = CmpOp::le;
    std::int32_t constant = 0;
    std::uint32_t grade = 0;
    std::vector<TolFormula> children;
    std::size_t size = 0;
    std::string text;
  };
  explicit TolFormula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static TolFormula make(Node n);

  std::shared_ptr<const Node> node_;
};

enum class TctlKind { True, Atom, ClockAtom, Not, And, AUntil, ARelease, Freeze };

/// Image of the grade-0 fragment: path quantifier A in place of a grade.
struct TctlFormula {
  TctlKind kind = TctlKind::True;
  std::string name;
  CmpOp op = CmpOp::le;
  std::int32_t constant = 0;
  std::vector<std::shared_ptr<const TctlFormula>> children;

  const TctlFormula& lhs() const { return *children.at(0); }
  const TctlFormula& rhs() const { return *children.at(1); }
  std::string str() const;
};

TolFormula parse_formula(const std::string& text);

/// Distinct subformulas ordered by size; equal sizes keep post-order of first
/// occurrence.
std::vector<TolFormula> subformulas_by_size(const TolFormula& f);

TctlFormula to_tctl(const TolFormula& f);

/// Freeze-bound identifiers in first-binding order.
std::vector<std::string> formula_clocks(const TolFormula& f);

/// Every (clock, constant) pair appearing in a clock atom.
std::vector<std::pair<std::string, std::int32_t>> clock_atoms(const TolFormula& f);

/// Number of Until/Release nodes.
std::size_t strategic_count(const TolFormula& f);

}  // namespace tol
