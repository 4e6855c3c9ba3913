#include "tol/logic.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <functional>
#include <set>
#include <unordered_set>

#include "tol/error.hpp"

namespace tol {

TolFormula TolFormula::make(Node n) {
  switch (n.kind) {
    case FormulaKind::True:
      n.text = "true";
      break;
    case FormulaKind::Atom:
      n.text = n.name;
      break;
    case FormulaKind::ClockAtom:
      n.text = n.name + " " + std::string(cmp_op_str(n.op)) + " " + std::to_string(n.constant);
      break;
    case FormulaKind::Not:
      n.size = 1 + n.children[0].size();
      n.text = "!" + n.children[0].str();
      break;
    case FormulaKind::And:
      n.size = 1 + n.children[0].size() + n.children[1].size();
      n.text = "(" + n.children[0].str() + " & " + n.children[1].str() + ")";
      break;
    case FormulaKind::Until:
    case FormulaKind::Release:
      n.size = 1 + n.children[0].size() + n.children[1].size();
      n.text = "<#" + std::to_string(n.grade) + "> (" + n.children[0].str() +
               (n.kind == FormulaKind::Until ? " U " : " R ") + n.children[1].str() + ")";
      break;
    case FormulaKind::Freeze:
      n.size = 1 + n.children[0].size();
      n.text = "(" + n.name + ". " + n.children[0].str() + ")";
      break;
  }
  return TolFormula(std::make_shared<const Node>(std::move(n)));
}

TolFormula TolFormula::truth() { return make(Node{}); }

TolFormula TolFormula::atom(std::string name) {
  Node n;
  n.kind = FormulaKind::Atom;
  n.name = std::move(name);
  return make(std::move(n));
}

TolFormula TolFormula::clock_atom(std::string clock, CmpOp op, std::int32_t constant) {
  Node n;
  n.kind = FormulaKind::ClockAtom;
  n.name = std::move(clock);
  n.op = op;
  n.constant = constant;
  return make(std::move(n));
}

TolFormula TolFormula::negate(TolFormula f) {
  Node n;
  n.kind = FormulaKind::Not;
  n.children = {std::move(f)};
  return make(std::move(n));
}

TolFormula TolFormula::conj(TolFormula a, TolFormula b) {
  Node n;
  n.kind = FormulaKind::And;
  n.children = {std::move(a), std::move(b)};
  return make(std::move(n));
}

TolFormula TolFormula::until(std::uint32_t grade, TolFormula a, TolFormula b) {
  Node n;
  n.kind = FormulaKind::Until;
  n.grade = grade;
  n.children = {std::move(a), std::move(b)};
  return make(std::move(n));
}

TolFormula TolFormula::release(std::uint32_t grade, TolFormula a, TolFormula b) {
  Node n;
  n.kind = FormulaKind::Release;
  n.grade = grade;
  n.children = {std::move(a), std::move(b)};
  return make(std::move(n));
}

TolFormula TolFormula::freeze(std::string clock, TolFormula body) {
  Node n;
  n.kind = FormulaKind::Freeze;
  n.name = std::move(clock);
  n.children = {std::move(body)};
  return make(std::move(n));
}

TolFormula TolFormula::falsity() { return negate(truth()); }

TolFormula TolFormula::disj(TolFormula a, TolFormula b) {
  return negate(conj(negate(std::move(a)), negate(std::move(b))));
}

TolFormula TolFormula::implies(TolFormula a, TolFormula b) {
  return negate(conj(std::move(a), negate(std::move(b))));
}

TolFormula TolFormula::finally(std::uint32_t grade, TolFormula f) {
  return until(grade, truth(), std::move(f));
}

TolFormula TolFormula::globally(std::uint32_t grade, TolFormula f) {
  return release(grade, falsity(), std::move(f));
}

TolFormula TolFormula::weak_until(std::uint32_t grade, TolFormula a, TolFormula b) {
  TolFormula either = disj(a, b);
  return release(grade, std::move(b), std::move(either));
}

// ---------------------------------------------------------------------------
// Parser

namespace {

enum class Tk { ident, number, op, end };

struct Tok {
  Tk kind = Tk::end;
  std::string text;
  std::size_t col = 0;
};

const std::set<std::string> kReserved = {"true", "false", "U", "R", "F", "G", "W"};

std::vector<Tok> lex(const std::string& s) {
  std::vector<Tok> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const unsigned char c = static_cast<unsigned char>(s[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    Tok t;
    t.col = i + 1;
    if (std::isalpha(c) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      t.kind = Tk::ident;
      t.text = s.substr(i, j - i);
      i = j;
    } else if (std::isdigit(c)) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      t.kind = Tk::number;
      t.text = s.substr(i, j - i);
      i = j;
    } else {
      t.kind = Tk::op;
      const std::string two = s.substr(i, 2);
      if (two == "<#" || two == "<=" || two == ">=" || two == "->") {
        t.text = two;
        i += 2;
      } else if (std::string("<>=!&|().").find(static_cast<char>(c)) != std::string::npos) {
        t.text = std::string(1, static_cast<char>(c));
        ++i;
      } else {
        throw FormulaError(i + 1, std::string("unexpected character '") + static_cast<char>(c) + "'");
      }
    }
    out.push_back(std::move(t));
  }
  out.push_back({Tk::end, "", s.size() + 1});
  return out;
}

bool cmp_token(const Tok& t) {
  return t.kind == Tk::op &&
         (t.text == "<" || t.text == "<=" || t.text == "=" || t.text == ">=" || t.text == ">");
}

CmpOp to_cmp(const std::string& s) {
  if (s == "<") return CmpOp::lt;
  if (s == "<=") return CmpOp::le;
  if (s == "=") return CmpOp::eq;
  if (s == ">=") return CmpOp::ge;
  return CmpOp::gt;
}

class FormulaParser {
 public:
  explicit FormulaParser(const std::string& text) : toks_(lex(text)) {}

  TolFormula run() {
    TolFormula f = implication();
    if (peek().kind != Tk::end) fail("unexpected '" + peek().text + "'");
    return f;
  }

 private:
  const Tok& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  bool at_op(const char* s) const { return peek().kind == Tk::op && peek().text == s; }
  bool at_ident(const char* s) const { return peek().kind == Tk::ident && peek().text == s; }

  [[noreturn]] void fail(const std::string& what) const {
    const Tok& t = peek();
    throw FormulaError(t.col, t.kind == Tk::end ? what + " (at end of input)" : what);
  }

  void expect_op(const char* s) {
    if (!at_op(s)) fail(std::string("expected '") + s + "'");
    ++pos_;
  }

  std::uint32_t nat() {
    if (peek().kind != Tk::number) fail("expected a natural number");
    const std::string& s = peek().text;
    std::uint32_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || v > 1'000'000'000u) fail("number out of range");
    ++pos_;
    return v;
  }

  TolFormula implication() {
    TolFormula lhs = disjunction();
    if (at_op("->")) {
      ++pos_;
      TolFormula rhs = implication();
      return TolFormula::implies(std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  TolFormula disjunction() {
    TolFormula f = conjunction();
    while (at_op("|")) {
      ++pos_;
      f = TolFormula::disj(std::move(f), conjunction());
    }
    return f;
  }

  TolFormula conjunction() {
    TolFormula f = unary();
    while (at_op("&")) {
      ++pos_;
      f = TolFormula::conj(std::move(f), unary());
    }
    return f;
  }

  TolFormula unary() {
    if (at_op("!")) {
      ++pos_;
      return TolFormula::negate(unary());
    }
    return primary();
  }

  TolFormula primary() {
    const Tok& t = peek();
    if (t.kind == Tk::op && t.text == "(") {
      ++pos_;
      TolFormula f = implication();
      expect_op(")");
      return f;
    }
    if (t.kind == Tk::op && t.text == "<#") return strategic();
    if (t.kind != Tk::ident) fail(t.kind == Tk::end ? "expected a formula" : "unexpected '" + t.text + "'");
    if (t.text == "true") {
      ++pos_;
      return TolFormula::truth();
    }
    if (t.text == "false") {
      ++pos_;
      return TolFormula::falsity();
    }
    if (kReserved.count(t.text)) fail("'" + t.text + "' is reserved");
    const std::string name = t.text;
    const std::size_t col = t.col;
    ++pos_;
    if (at_op(".")) {
      ++pos_;
      if (std::find(scope_.begin(), scope_.end(), name) != scope_.end()) {
        throw FormulaError(col, "freeze identifier '" + name + "' shadows an enclosing binder");
      }
      scope_.push_back(name);
      TolFormula body = implication();
      scope_.pop_back();
      return TolFormula::freeze(name, std::move(body));
    }
    if (cmp_token(peek())) {
      const CmpOp op = to_cmp(peek().text);
      ++pos_;
      const std::uint32_t c = nat();
      return TolFormula::clock_atom(name, op, static_cast<std::int32_t>(c));
    }
    return TolFormula::atom(name);
  }

  TolFormula strategic() {
    expect_op("<#");
    const std::uint32_t n = nat();
    expect_op(">");
    if (at_ident("F")) {
      ++pos_;
      return TolFormula::finally(n, unary());
    }
    if (at_ident("G")) {
      ++pos_;
      return TolFormula::globally(n, unary());
    }
    if (!at_op("(")) fail("expected '(', F or G after a strategic modality");
    ++pos_;
    TolFormula lhs = implication();
    const Tok& mode = peek();
    if (mode.kind != Tk::ident || (mode.text != "U" && mode.text != "R" && mode.text != "W")) {
      fail("expected U, R or W");
    }
    const std::string m = mode.text;
    ++pos_;
    TolFormula rhs = implication();
    expect_op(")");
    if (m == "U") return TolFormula::until(n, std::move(lhs), std::move(rhs));
    if (m == "R") return TolFormula::release(n, std::move(lhs), std::move(rhs));
    return TolFormula::weak_until(n, std::move(lhs), std::move(rhs));
  }

  std::vector<Tok> toks_;
  std::size_t pos_ = 0;
  std::vector<std::string> scope_;
};

void visit_post(const TolFormula& f, const std::function<void(const TolFormula&)>& fn) {
  switch (f.kind()) {
    case FormulaKind::Not:
    case FormulaKind::Freeze:
      visit_post(f.lhs(), fn);
      break;
    case FormulaKind::And:
    case FormulaKind::Until:
    case FormulaKind::Release:
      visit_post(f.lhs(), fn);
      visit_post(f.rhs(), fn);
      break;
    default:
      break;
  }
  fn(f);
}

}  // namespace

TolFormula parse_formula(const std::string& text) { return FormulaParser(text).run(); }

std::vector<TolFormula> subformulas_by_size(const TolFormula& f) {
  std::vector<TolFormula> out;
  std::unordered_set<std::string> seen;
  visit_post(f, [&](const TolFormula& g) {
    if (seen.insert(g.str()).second) out.push_back(g);
  });
  std::stable_sort(out.begin(), out.end(),
                   [](const TolFormula& a, const TolFormula& b) { return a.size() < b.size(); });
  return out;
}

TctlFormula to_tctl(const TolFormula& f) {
  TctlFormula t;
  t.name = f.name();
  t.op = f.op();
  t.constant = f.constant();
  auto child = [](const TolFormula& g) { return std::make_shared<const TctlFormula>(to_tctl(g)); };
  switch (f.kind()) {
    case FormulaKind::True: t.kind = TctlKind::True; break;
    case FormulaKind::Atom: t.kind = TctlKind::Atom; break;
    case FormulaKind::ClockAtom: t.kind = TctlKind::ClockAtom; break;
    case FormulaKind::Not:
      t.kind = TctlKind::Not;
      t.children = {child(f.lhs())};
      break;
    case FormulaKind::And:
      t.kind = TctlKind::And;
      t.children = {child(f.lhs()), child(f.rhs())};
      break;
    case FormulaKind::Until:
    case FormulaKind::Release:
      if (f.grade() != 0) {
        throw FragmentError("operator " + f.str() + " has grade " + std::to_string(f.grade()) +
                            "; only grade 0 translates to TCTL");
      }
      t.kind = f.kind() == FormulaKind::Until ? TctlKind::AUntil : TctlKind::ARelease;
      t.children = {child(f.lhs()), child(f.rhs())};
      break;
    case FormulaKind::Freeze:
      t.kind = TctlKind::Freeze;
      t.children = {child(f.lhs())};
      break;
  }
  return t;
}

std::string TctlFormula::str() const {
  switch (kind) {
    case TctlKind::True: return "true";
    case TctlKind::Atom: return name;
    case TctlKind::ClockAtom:
      return name + " " + std::string(cmp_op_str(op)) + " " + std::to_string(constant);
    case TctlKind::Not: return "!" + lhs().str();
    case TctlKind::And: return "(" + lhs().str() + " & " + rhs().str() + ")";
    case TctlKind::AUntil: return "A(" + lhs().str() + " U " + rhs().str() + ")";
    case TctlKind::ARelease: return "A(" + lhs().str() + " R " + rhs().str() + ")";
    case TctlKind::Freeze: return "(" + name + ". " + lhs().str() + ")";
  }
  return "?";
}

std::vector<std::string> formula_clocks(const TolFormula& f) {
  std::vector<std::string> out;
  std::function<void(const TolFormula&)> walk = [&](const TolFormula& g) {
    if (g.kind() == FormulaKind::Freeze &&
        std::find(out.begin(), out.end(), g.name()) == out.end()) {
      out.push_back(g.name());
    }
    switch (g.kind()) {
      case FormulaKind::Not:
      case FormulaKind::Freeze:
        walk(g.lhs());
        break;
      case FormulaKind::And:
      case FormulaKind::Until:
      case FormulaKind::Release:
        walk(g.lhs());
        walk(g.rhs());
        break;
      default:
        break;
    }
  };
  walk(f);
  return out;
}

std::vector<std::pair<std::string, std::int32_t>> clock_atoms(const TolFormula& f) {
  std::vector<std::pair<std::string, std::int32_t>> out;
  visit_post(f, [&](const TolFormula& g) {
    if (g.kind() == FormulaKind::ClockAtom) out.emplace_back(g.name(), g.constant());
  });
  return out;
}

std::size_t strategic_count(const TolFormula& f) {
  std::size_t n = 0;
  visit_post(f, [&](const TolFormula& g) {
    if (g.kind() == FormulaKind::Until || g.kind() == FormulaKind::Release) ++n;
  });
  return n;
}

}  // namespace tol
