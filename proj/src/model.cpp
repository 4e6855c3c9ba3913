#include "tol/model.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <optional>
#include <set>
#include <sstream>

#include "tol/error.hpp"
#include "tol/logic.hpp"

namespace tol {

namespace {

struct Token {
  std::string text;
  std::size_t line = 0;
  std::size_t col = 0;
  bool number = false;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::vector<Token> tokenize_line(const std::string& line, std::size_t lineno) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (c == '#') break;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    Token t{"", lineno, i + 1, false};
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < line.size() && ident_char(line[j])) ++j;
      t.text = line.substr(i, j - i);
      i = j;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < line.size() && std::isdigit(static_cast<unsigned char>(line[j]))) ++j;
      t.text = line.substr(i, j - i);
      t.number = true;
      i = j;
    } else if ((c == '<' || c == '>') && i + 1 < line.size() && line[i + 1] == '=') {
      t.text = line.substr(i, 2);
      i += 2;
    } else if (c == '-' && i + 1 < line.size() && line[i + 1] == '>') {
      t.text = "->";
      i += 2;
    } else if (c == '<' || c == '>' || c == '=' || c == '&' || c == ',') {
      t.text = std::string(1, c);
      ++i;
    } else {
      throw ModelError(ModelDiag::syntax, lineno, i + 1,
                       std::string("unexpected character '") + c + "'");
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::optional<CmpOp> parse_op(const std::string& s) {
  if (s == "<") return CmpOp::lt;
  if (s == "<=") return CmpOp::le;
  if (s == "=") return CmpOp::eq;
  if (s == ">=") return CmpOp::ge;
  if (s == ">") return CmpOp::gt;
  return std::nullopt;
}

bool is_ident(const Token& t) { return !t.text.empty() && ident_start(t.text[0]); }

class LineParser {
 public:
  LineParser(std::vector<Token> toks, std::size_t lineno, std::size_t line_len)
      : toks_(std::move(toks)), lineno_(lineno), end_col_(line_len + 1) {}

  bool done() const { return pos_ >= toks_.size(); }
  const Token* peek() const { return done() ? nullptr : &toks_[pos_]; }
  bool peek_is(const std::string& s) const { return !done() && toks_[pos_].text == s; }

  [[noreturn]] void fail(const std::string& what) const {
    const std::size_t col = done() ? end_col_ : toks_[pos_].col;
    throw ModelError(ModelDiag::syntax, lineno_, col, what);
  }

  const Token& next(const char* expected) {
    if (done()) fail(std::string("expected ") + expected + " at end of line");
    return toks_[pos_++];
  }

  const Token& ident(const char* what) {
    if (done() || !is_ident(toks_[pos_])) fail(std::string("expected ") + what);
    return toks_[pos_++];
  }

  void expect(const std::string& s) {
    if (!peek_is(s)) fail("expected '" + s + "'");
    ++pos_;
  }

  std::uint32_t nat() {
    if (done() || !toks_[pos_].number) fail("expected a natural number");
    const Token& t = toks_[pos_];
    std::uint32_t v = 0;
    auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc() || v > 1'000'000'000u) fail("number out of range");
    ++pos_;
    return v;
  }

  std::size_t line() const { return lineno_; }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::size_t lineno_;
  std::size_t end_col_;
};

const std::set<std::string> kLocationKeywords = {"init", "goal", "invariant", "labels"};

struct PendingEdge {
  std::string src, dst;
  std::size_t line, src_col, dst_col;
};

class ModelParser {
 public:
  Wta run(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    std::size_t lineno = 0;
    bool header = false;
    while (std::getline(in, raw)) {
      ++lineno;
      if (!raw.empty() && raw.back() == '\r') raw.pop_back();
      auto toks = tokenize_line(raw, lineno);
      if (toks.empty()) continue;
      LineParser p(std::move(toks), lineno, raw.size());
      if (!header) {
        if (!p.peek_is("wta")) p.fail("model must start with 'wta'");
        p.next("wta");
        if (!p.done()) p.fail("unexpected token after 'wta'");
        header = true;
        continue;
      }
      const Token& kw = p.next("a declaration");
      if (kw.text == "clocks") {
        parse_clocks(p);
      } else if (kw.text == "location") {
        parse_location(p);
      } else if (kw.text == "edge") {
        parse_edge(p);
      } else {
        throw ModelError(ModelDiag::syntax, lineno, kw.col, "unknown declaration '" + kw.text + "'");
      }
    }
    if (!header) throw ModelError(ModelDiag::syntax, lineno + 1, 1, "empty model");
    if (!init_seen_) {
      throw ModelError(ModelDiag::missing_initial, lineno + 1, 1, "no location is marked init");
    }
    resolve_edges();
    m_.validate();
    return std::move(m_);
  }

 private:
  void parse_clocks(LineParser& p) {
    while (!p.done()) {
      const Token& t = p.ident("a clock name");
      if (m_.find_clock(t.text) != m_.clocks.size()) {
        throw ModelError(ModelDiag::duplicate_clock, t.line, t.col,
                         "clock '" + t.text + "' declared twice");
      }
      m_.clocks.push_back(t.text);
    }
  }

  ClockAtom parse_atom(LineParser& p) {
    const Token& c = p.ident("a clock name");
    const std::size_t idx = m_.find_clock(c.text);
    if (idx == m_.clocks.size()) {
      throw ModelError(ModelDiag::undeclared_clock, c.line, c.col,
                       "undeclared clock '" + c.text + "'");
    }
    const Token& opt = p.next("a comparison operator");
    const auto op = parse_op(opt.text);
    if (!op) throw ModelError(ModelDiag::syntax, opt.line, opt.col, "expected a comparison operator");
    const std::uint32_t v = p.nat();
    return {idx, *op, static_cast<std::int32_t>(v)};
  }

  std::vector<ClockAtom> parse_conjunction(LineParser& p, std::vector<std::size_t>* cols) {
    std::vector<ClockAtom> out;
    do {
      if (cols) cols->push_back(p.peek() ? p.peek()->col : 0);
      out.push_back(parse_atom(p));
      if (!p.peek_is("&")) break;
      p.next("&");
    } while (true);
    return out;
  }

  void parse_location(LineParser& p) {
    const Token& id = p.ident("a location name");
    if (location_lines_.count(id.text)) {
      throw ModelError(ModelDiag::duplicate_location, id.line, id.col,
                       "location '" + id.text + "' declared twice");
    }
    Location loc;
    loc.id = id.text;
    while (!p.done()) {
      const Token& t = p.next("a location attribute");
      if (t.text == "init") {
        if (init_seen_) {
          throw ModelError(ModelDiag::multiple_initial, t.line, t.col,
                           "a second location is marked init");
        }
        init_seen_ = true;
        m_.initial = m_.locations.size();
      } else if (t.text == "goal") {
        loc.is_goal = true;
      } else if (t.text == "invariant") {
        std::vector<std::size_t> cols;
        auto atoms = parse_conjunction(p, &cols);
        for (std::size_t k = 0; k < atoms.size(); ++k) {
          const ClockAtom& a = atoms[k];
          if (a.op != CmpOp::lt && a.op != CmpOp::le) {
            throw ModelError(ModelDiag::invariant_lower_bound, p.line(), cols[k],
                             "invariants admit only < and <= bounds");
          }
          if (a.op == CmpOp::lt && a.constant == 0) {
            throw ModelError(ModelDiag::unsatisfiable_invariant, p.line(), cols[k],
                             "invariant of '" + loc.id + "' is unsatisfiable");
          }
        }
        loc.invariant.insert(loc.invariant.end(), atoms.begin(), atoms.end());
      } else if (t.text == "labels") {
        while (!p.done() && !kLocationKeywords.count(p.peek()->text)) {
          loc.labels.push_back(p.ident("a label").text);
        }
      } else {
        throw ModelError(ModelDiag::syntax, t.line, t.col, "unexpected '" + t.text + "'");
      }
    }
    std::sort(loc.labels.begin(), loc.labels.end());
    loc.labels.erase(std::unique(loc.labels.begin(), loc.labels.end()), loc.labels.end());
    location_lines_[loc.id] = id.line;
    m_.locations.push_back(std::move(loc));
  }

  void parse_edge(LineParser& p) {
    const Token& src = p.ident("a source location");
    p.expect("->");
    const Token& dst = p.ident("a target location");
    pending_.push_back({src.text, dst.text, src.line, src.col, dst.col});
    Edge e;
    bool have_action = false;
    bool have_weight = false;
    while (!p.done()) {
      const Token& t = p.next("an edge attribute");
      if (t.text == "action") {
        e.action = p.ident("an action name").text;
        have_action = true;
      } else if (t.text == "guard") {
        auto atoms = parse_conjunction(p, nullptr);
        e.guard.insert(e.guard.end(), atoms.begin(), atoms.end());
      } else if (t.text == "reset") {
        do {
          const Token& c = p.ident("a clock name");
          const std::size_t idx = m_.find_clock(c.text);
          if (idx == m_.clocks.size()) {
            throw ModelError(ModelDiag::undeclared_clock, c.line, c.col,
                             "undeclared clock '" + c.text + "'");
          }
          e.resets.push_back(idx);
          if (!p.peek_is(",")) break;
          p.next(",");
        } while (true);
      } else if (t.text == "weight") {
        e.weight = p.nat();
        have_weight = true;
      } else {
        throw ModelError(ModelDiag::syntax, t.line, t.col, "unexpected '" + t.text + "'");
      }
    }
    if (!have_action) p.fail("edge needs an action");
    if (!have_weight) p.fail("edge needs a weight");
    std::sort(e.resets.begin(), e.resets.end());
    e.resets.erase(std::unique(e.resets.begin(), e.resets.end()), e.resets.end());
    m_.edges.push_back(std::move(e));
  }

  void resolve_edges() {
    std::map<std::string, std::size_t> index;
    for (std::size_t l = 0; l < m_.locations.size(); ++l) index[m_.locations[l].id] = l;
    for (std::size_t k = 0; k < pending_.size(); ++k) {
      const auto& pe = pending_[k];
      auto s = index.find(pe.src);
      if (s == index.end()) {
        throw ModelError(ModelDiag::unknown_location, pe.line, pe.src_col,
                         "unknown location '" + pe.src + "'");
      }
      auto d = index.find(pe.dst);
      if (d == index.end()) {
        throw ModelError(ModelDiag::unknown_location, pe.line, pe.dst_col,
                         "unknown location '" + pe.dst + "'");
      }
      m_.edges[k].source = s->second;
      m_.edges[k].target = d->second;
    }
  }

  Wta m_;
  bool init_seen_ = false;
  std::map<std::string, std::size_t> location_lines_;
  std::vector<PendingEdge> pending_;
};

void append_atoms(std::ostringstream& os, const Wta& m, const std::vector<ClockAtom>& atoms) {
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    if (k) os << " &";
    os << ' ' << atom_str(m, atoms[k]);
  }
}

}  // namespace

void Wta::validate() {
  auto fail = [](ModelDiag d, const std::string& what) { throw ModelError(d, 0, 0, what); };
  if (locations.empty()) fail(ModelDiag::missing_initial, "model has no locations");
  if (initial >= locations.size()) fail(ModelDiag::missing_initial, "initial location missing");
  std::set<std::string> seen;
  for (std::size_t c = 0; c < clocks.size(); ++c) {
    if (!seen.insert(clocks[c]).second) fail(ModelDiag::duplicate_clock, "duplicate clock");
  }
  seen.clear();
  for (const auto& loc : locations) {
    if (!seen.insert(loc.id).second) fail(ModelDiag::duplicate_location, "duplicate " + loc.id);
    for (const auto& a : loc.invariant) {
      if (a.clock >= clocks.size()) fail(ModelDiag::undeclared_clock, "undeclared clock");
      if (a.op != CmpOp::lt && a.op != CmpOp::le) {
        fail(ModelDiag::invariant_lower_bound, "invariants admit only < and <= bounds");
      }
      if (a.constant < 0 || (a.op == CmpOp::lt && a.constant == 0)) {
        fail(ModelDiag::unsatisfiable_invariant, "invariant of '" + loc.id + "' is unsatisfiable");
      }
    }
  }
  out_.assign(locations.size(), {});
  std::set<std::string> acts;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const Edge& e = edges[k];
    if (e.source >= locations.size() || e.target >= locations.size()) {
      fail(ModelDiag::unknown_location, "edge endpoint out of range");
    }
    for (const auto& a : e.guard) {
      if (a.clock >= clocks.size()) fail(ModelDiag::undeclared_clock, "undeclared clock");
    }
    for (std::size_t r : e.resets) {
      if (r >= clocks.size()) fail(ModelDiag::undeclared_clock, "undeclared clock");
    }
    acts.insert(e.action);
    out_[e.source].push_back(k);
  }
  actions.assign(acts.begin(), acts.end());
}

std::size_t Wta::location_index(const std::string& id) const {
  for (std::size_t l = 0; l < locations.size(); ++l) {
    if (locations[l].id == id) return l;
  }
  throw LookupError("unknown location '" + id + "'");
}

std::size_t Wta::find_clock(const std::string& name) const {
  return static_cast<std::size_t>(std::find(clocks.begin(), clocks.end(), name) - clocks.begin());
}

bool Wta::has_label(std::size_t l, const std::string& p) const {
  const Location& loc = locations.at(l);
  if (p == "goal" && loc.is_goal) return true;
  return std::binary_search(loc.labels.begin(), loc.labels.end(), p);
}

bool Wta::operator==(const Wta& other) const {
  return locations == other.locations && initial == other.initial && clocks == other.clocks &&
         actions == other.actions && edges == other.edges;
}

Wta parse_model(const std::string& text) { return ModelParser().run(text); }

std::string atom_str(const Wta& m, const ClockAtom& a) {
  return m.clocks.at(a.clock) + " " + std::string(cmp_op_str(a.op)) + " " +
         std::to_string(a.constant);
}

std::string serialize(const Wta& m) {
  std::ostringstream os;
  os << "wta\n";
  if (!m.clocks.empty()) {
    os << "clocks";
    for (const auto& c : m.clocks) os << ' ' << c;
    os << '\n';
  }
  for (std::size_t l = 0; l < m.locations.size(); ++l) {
    const Location& loc = m.locations[l];
    os << "location " << loc.id;
    if (l == m.initial) os << " init";
    if (loc.is_goal) os << " goal";
    if (!loc.invariant.empty()) {
      os << " invariant";
      append_atoms(os, m, loc.invariant);
    }
    if (!loc.labels.empty()) {
      os << " labels";
      for (const auto& p : loc.labels) os << ' ' << p;
    }
    os << '\n';
  }
  for (const Edge& e : m.edges) {
    os << "edge " << m.locations[e.source].id << " -> " << m.locations[e.target].id << " action "
       << e.action;
    if (!e.guard.empty()) {
      os << " guard";
      append_atoms(os, m, e.guard);
    }
    if (!e.resets.empty()) {
      os << " reset ";
      for (std::size_t k = 0; k < e.resets.size(); ++k) {
        if (k) os << ',';
        os << m.clocks[e.resets[k]];
      }
    }
    os << " weight " << e.weight << '\n';
  }
  return os.str();
}

std::vector<Edge> edges_from(const Wta& m, const std::string& l) {
  const std::size_t idx = m.location_index(l);
  std::vector<Edge> out;
  for (std::size_t k : m.out_edges(idx)) out.push_back(m.edges[k]);
  return out;
}

std::map<std::string, std::int32_t> max_constants(const Wta& m, const TolFormula& f) {
  std::map<std::string, std::int32_t> out;
  for (const auto& c : m.clocks) out[c] = 0;
  for (const auto& j : formula_clocks(f)) out[j] = 0;
  auto bump = [&](const std::string& c, std::int32_t v) {
    auto& slot = out[c];
    slot = std::max(slot, v);
  };
  for (const auto& loc : m.locations) {
    for (const auto& a : loc.invariant) bump(m.clocks[a.clock], a.constant);
  }
  for (const auto& e : m.edges) {
    for (const auto& a : e.guard) bump(m.clocks[a.clock], a.constant);
  }
  for (const auto& [clock, c] : clock_atoms(f)) bump(clock, c);
  return out;
}

}  // namespace tol
