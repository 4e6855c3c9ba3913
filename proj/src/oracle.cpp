#include "tol/oracle.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <limits>
#include <memory>
#include <map>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "tol/error.hpp"

namespace tol {

namespace {

bool holds(std::int64_t v, std::int64_t denom, CmpOp op, std::int64_t c) {
  const std::int64_t k = c * denom;
  switch (op) {
    case CmpOp::lt: return v < k;
    case CmpOp::le: return v <= k;
    case CmpOp::eq: return v == k;
    case CmpOp::ge: return v >= k;
    case CmpOp::gt: return v > k;
  }
  return false;
}

bool all_hold(const std::vector<ClockAtom>& atoms, const std::vector<std::int64_t>& v,
              std::int64_t denom) {
  return std::all_of(atoms.begin(), atoms.end(), [&](const ClockAtom& a) {
    return holds(v[a.clock], denom, a.op, a.constant);
  });
}

class GraphBuilder {
 public:
  GraphBuilder(const Wta& m, const TolFormula& f, const OracleOptions& opts) : m_(m), opts_(opts) {
    g_.clock_names = m.clocks;
    const auto fc = formula_clocks(f);
    g_.clock_names.insert(g_.clock_names.end(), fc.begin(), fc.end());
    const auto mc = max_constants(m, f);
    for (const auto& c : g_.clock_names) g_.caps.push_back(mc.at(c));
    n_ = g_.clock_names.size();
    g_.denom = 2 * static_cast<std::int64_t>(n_ + 1);
    g_.freeze_target.resize(fc.size());
  }

  ExplicitGraph build() {
    g_.initial = intern({m_.initial, std::vector<std::int64_t>(n_, 0)});
    while (!queue_.empty()) {
      const std::size_t s = queue_.front();
      queue_.pop_front();
      expand(s);
    }
    g_.out.assign(g_.states.size(), {});
    for (std::size_t k = 0; k < g_.steps.size(); ++k) g_.out[g_.steps[k].source].push_back(k);
    for (auto& ft : g_.freeze_target) ft.resize(g_.states.size());
    for (const auto& [s, k, t] : freezes_) g_.freeze_target[k][s] = t;
    return std::move(g_);
  }

 private:
  std::int64_t cap_units(std::size_t i) const { return g_.caps[i] * g_.denom; }

  std::vector<std::int64_t> canonical(std::vector<std::int64_t> v) const {
    const std::int64_t d = g_.denom;
    std::vector<std::int64_t> fracs;
    for (std::size_t i = 0; i < n_; ++i) {
      if (v[i] > cap_units(i)) {
        v[i] = cap_units(i) + d / 2;
      } else if (v[i] % d != 0) {
        fracs.push_back(v[i] % d);
      }
    }
    std::sort(fracs.begin(), fracs.end());
    fracs.erase(std::unique(fracs.begin(), fracs.end()), fracs.end());
    for (std::size_t i = 0; i < n_; ++i) {
      if (v[i] > cap_units(i) || v[i] % d == 0) continue;
      const auto rank = std::lower_bound(fracs.begin(), fracs.end(), v[i] % d) - fracs.begin();
      v[i] = (v[i] / d) * d + 2 * (rank + 1);
    }
    return v;
  }

  std::size_t intern(ExplicitState s) {
    s.values = canonical(std::move(s.values));
    auto key = std::make_pair(s.location, s.values);
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    if (g_.states.size() >= opts_.state_cap) {
      throw OracleScaleError("explicit state space exceeds the cap of " +
                             std::to_string(opts_.state_cap) + " states");
    }
    const std::size_t id = g_.states.size();
    index_.emplace(std::move(key), id);
    g_.states.push_back(std::move(s));
    queue_.push_back(id);
    return id;
  }

  void expand(std::size_t s) {
    const std::size_t l = g_.states[s].location;
    std::vector<std::int64_t> w = g_.states[s].values;
    std::set<std::pair<std::size_t, std::size_t>> seen;
    const std::size_t nx = m_.clocks.size();
    while (all_hold(m_.locations[l].invariant, w, g_.denom)) {
      for (std::size_t e : m_.out_edges(l)) {
        const Edge& edge = m_.edges[e];
        if (!all_hold(edge.guard, w, g_.denom)) continue;
        std::vector<std::int64_t> u = w;
        for (std::size_t r : edge.resets) u[r] = 0;
        if (!all_hold(m_.locations[edge.target].invariant, u, g_.denom)) continue;
        const std::size_t t = intern({edge.target, std::move(u)});
        if (seen.insert({e, t}).second) g_.steps.push_back({s, e, t});
      }
      bool frozen = true;
      for (std::size_t i = 0; i < n_; ++i) {
        if (w[i] <= cap_units(i)) {
          ++w[i];
          frozen = false;
        }
      }
      if (frozen) break;
    }
    for (std::size_t k = 0; k + nx < n_; ++k) {
      std::vector<std::int64_t> u = g_.states[s].values;
      u[nx + k] = 0;
      const std::size_t t = intern({l, std::move(u)});
      freezes_.push_back({s, k, t});
    }
  }

  const Wta& m_;
  OracleOptions opts_;
  std::size_t n_ = 0;
  ExplicitGraph g_;
  std::map<std::pair<std::size_t, std::vector<std::int64_t>>, std::size_t> index_;
  std::deque<std::size_t> queue_;
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> freezes_;
};

std::size_t clock_position(const ExplicitGraph& g, const std::string& name) {
  auto it = std::find(g.clock_names.begin(), g.clock_names.end(), name);
  if (it == g.clock_names.end()) throw BindingError("unbound clock '" + name + "'");
  return static_cast<std::size_t>(it - g.clock_names.begin());
}

std::size_t freeze_position(const Wta& m, const ExplicitGraph& g, const std::string& name) {
  return clock_position(g, name) - m.clocks.size();
}

std::vector<char> atom_sat(const Wta& m, const ExplicitGraph& g, FormulaKind kind,
                           const std::string& name, CmpOp op, std::int32_t c) {
  std::vector<char> out(g.states.size(), 0);
  if (kind == FormulaKind::True) {
    std::fill(out.begin(), out.end(), 1);
  } else if (kind == FormulaKind::Atom) {
    for (std::size_t s = 0; s < g.states.size(); ++s) out[s] = m.has_label(g.states[s].location, name);
  } else {
    const std::size_t i = clock_position(g, name);
    for (std::size_t s = 0; s < g.states.size(); ++s) {
      out[s] = holds(g.states[s].values[i], g.denom, op, c);
    }
  }
  return out;
}

/// Decides whether some admissible demon step from `s` keeps every
/// compatible successor in `y`.
using StepPredicate = std::function<bool(std::size_t s, const std::vector<char>& y)>;

std::vector<char> least_until(const std::vector<char>& a, const std::vector<char>& b,
                              const StepPredicate& pre) {
  std::vector<char> y = b;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t s = 0; s < y.size(); ++s) {
      if (!y[s] && a[s] && pre(s, y)) {
        y[s] = 1;
        changed = true;
      }
    }
  }
  return y;
}

std::vector<char> greatest_release(const std::vector<char>& a, const std::vector<char>& b,
                                   const StepPredicate& pre) {
  std::vector<char> y(b.size(), 1);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t s = 0; s < y.size(); ++s) {
      if (y[s] && !(b[s] && (a[s] || pre(s, y)))) {
        y[s] = 0;
        changed = true;
      }
    }
  }
  return y;
}

/// Per-location deactivation masks over the position of each edge in its
/// source's out list.
using Masks = std::vector<std::vector<std::uint64_t>>;

std::vector<std::size_t> edge_positions(const Wta& m) {
  std::vector<std::size_t> pos(m.edges.size(), 0);
  for (std::size_t l = 0; l < m.locations.size(); ++l) {
    const auto& out = m.out_edges(l);
    for (std::size_t k = 0; k < out.size(); ++k) pos[out[k]] = k;
  }
  return pos;
}

std::vector<std::uint64_t> choice_masks(const Wta& m, std::size_t l, std::uint64_t n) {
  const auto& out = m.out_edges(l);
  if (out.size() > 20) {
    throw OracleScaleError("location '" + m.locations[l].id + "' has too many edges to enumerate");
  }
  const std::uint64_t full = (std::uint64_t{1} << out.size()) - 1;
  std::vector<std::uint64_t> masks;
  for (std::uint64_t mask = 0; mask <= full; ++mask) {
    if (mask == full && !out.empty()) continue;
    std::uint64_t w = 0;
    for (std::size_t k = 0; k < out.size(); ++k) {
      if (mask >> k & 1) w += m.edges[out[k]].weight;
    }
    if (w <= n) masks.push_back(mask);
  }
  return masks;
}

/// Evaluates TOL formulas on an explicit graph; strategic operators are
/// resolved by `pre_for(grade)`.
class Evaluator {
 public:
  using PreFactory = std::function<StepPredicate(std::uint32_t grade)>;

  Evaluator(const Wta& m, const ExplicitGraph& g, PreFactory pre_for)
      : m_(m), g_(g), pre_for_(std::move(pre_for)) {}

  const std::vector<char>& eval(const TolFormula& f) {
    auto it = memo_.find(f.str());
    if (it != memo_.end()) return it->second;
    std::vector<char> out;
    switch (f.kind()) {
      case FormulaKind::True:
      case FormulaKind::Atom:
      case FormulaKind::ClockAtom:
        out = atom_sat(m_, g_, f.kind(), f.name(), f.op(), f.constant());
        break;
      case FormulaKind::Not: {
        const auto& a = eval(f.lhs());
        out.resize(a.size());
        for (std::size_t s = 0; s < a.size(); ++s) out[s] = !a[s];
        break;
      }
      case FormulaKind::And: {
        const auto a = eval(f.lhs());
        const auto& b = eval(f.rhs());
        out.resize(a.size());
        for (std::size_t s = 0; s < a.size(); ++s) out[s] = a[s] && b[s];
        break;
      }
      case FormulaKind::Until: {
        const auto a = eval(f.lhs());
        const auto b = eval(f.rhs());
        out = least_until(a, b, pre_for_(f.grade()));
        break;
      }
      case FormulaKind::Release: {
        const auto a = eval(f.lhs());
        const auto b = eval(f.rhs());
        out = greatest_release(a, b, pre_for_(f.grade()));
        break;
      }
      case FormulaKind::Freeze: {
        const auto& a = eval(f.lhs());
        const auto& ft = g_.freeze_target.at(freeze_position(m_, g_, f.name()));
        out.resize(a.size());
        for (std::size_t s = 0; s < a.size(); ++s) out[s] = a[ft[s]];
        break;
      }
    }
    return memo_.emplace(f.str(), std::move(out)).first->second;
  }

 private:
  const Wta& m_;
  const ExplicitGraph& g_;
  PreFactory pre_for_;
  std::unordered_map<std::string, std::vector<char>> memo_;
};

Evaluator game_evaluator(const Wta& m, const ExplicitGraph& g,
                         std::shared_ptr<std::map<std::uint32_t, Masks>> cache) {
  auto pos = std::make_shared<std::vector<std::size_t>>(edge_positions(m));
  return Evaluator(m, g, [&m, &g, cache, pos](std::uint32_t n) -> StepPredicate {
    auto& masks = (*cache)[n];
    if (masks.empty()) {
      for (std::size_t l = 0; l < m.locations.size(); ++l) masks.push_back(choice_masks(m, l, n));
    }
    const Masks* mk = &masks;
    return [&g, mk, pos](std::size_t s, const std::vector<char>& y) {
      const auto& steps = g.out[s];
      for (std::uint64_t mask : (*mk)[g.states[s].location]) {
        bool some = false;
        bool all = true;
        for (std::size_t k : steps) {
          const ExplicitStep& st = g.steps[k];
          if (mask >> (*pos)[st.edge] & 1) continue;
          if (y[st.target]) {
            some = true;
          } else {
            all = false;
            break;
          }
        }
        if (some && all) return true;
      }
      return false;
    };
  });
}

}  // namespace

ExplicitGraph discretize(const Wta& m, const TolFormula& f, const OracleOptions& opts) {
  return GraphBuilder(m, f, opts).build();
}

std::vector<std::vector<std::size_t>> demon_choices(const Wta& m, std::size_t l, std::uint64_t n) {
  const auto& out = m.out_edges(l);
  std::vector<std::vector<std::size_t>> result;
  for (std::uint64_t mask : choice_masks(m, l, n)) {
    std::vector<std::size_t> d;
    for (std::size_t k = 0; k < out.size(); ++k) {
      if (mask >> k & 1) d.push_back(out[k]);
    }
    result.push_back(std::move(d));
  }
  return result;
}

std::vector<char> oracle_sat(const Wta& m, const ExplicitGraph& g, const TolFormula& f) {
  auto cache = std::make_shared<std::map<std::uint32_t, Masks>>();
  Evaluator ev = game_evaluator(m, g, cache);
  return ev.eval(f);
}

bool oracle_check(const Wta& m, const TolFormula& f, const OracleOptions& opts) {
  check_binding(m, f);
  const ExplicitGraph g = discretize(m, f, opts);
  return oracle_sat(m, g, f)[g.initial];
}

std::vector<char> tctl_sat(const Wta& m, const ExplicitGraph& g, const TctlFormula& f) {
  const std::size_t n = g.states.size();
  std::vector<char> out(n, 0);
  switch (f.kind) {
    case TctlKind::True:
      return atom_sat(m, g, FormulaKind::True, f.name, f.op, f.constant);
    case TctlKind::Atom:
      return atom_sat(m, g, FormulaKind::Atom, f.name, f.op, f.constant);
    case TctlKind::ClockAtom:
      return atom_sat(m, g, FormulaKind::ClockAtom, f.name, f.op, f.constant);
    case TctlKind::Not: {
      const auto a = tctl_sat(m, g, f.lhs());
      for (std::size_t s = 0; s < n; ++s) out[s] = !a[s];
      return out;
    }
    case TctlKind::And: {
      const auto a = tctl_sat(m, g, f.lhs());
      const auto b = tctl_sat(m, g, f.rhs());
      for (std::size_t s = 0; s < n; ++s) out[s] = a[s] && b[s];
      return out;
    }
    case TctlKind::AUntil: {
      // Worklist over predecessors: a state joins once all its successors
      // are in, counting down its remaining successors.
      const auto a = tctl_sat(m, g, f.lhs());
      const auto b = tctl_sat(m, g, f.rhs());
      std::vector<std::vector<std::size_t>> preds(n);
      std::vector<std::size_t> pending(n, 0);
      for (const auto& st : g.steps) preds[st.target].push_back(st.source);
      for (std::size_t s = 0; s < n; ++s) pending[s] = g.out[s].size();
      std::vector<std::size_t> work;
      for (std::size_t s = 0; s < n; ++s) {
        if (b[s]) {
          out[s] = 1;
          work.push_back(s);
        }
      }
      while (!work.empty()) {
        const std::size_t t = work.back();
        work.pop_back();
        for (std::size_t p : preds[t]) {
          if (out[p]) continue;
          if (--pending[p] == 0 && a[p]) {
            out[p] = 1;
            work.push_back(p);
          }
        }
      }
      return out;
    }
    case TctlKind::ARelease: {
      // A(a R b) = !E(!a U !b): least fixpoint of the existential dual.
      const auto a = tctl_sat(m, g, f.lhs());
      const auto b = tctl_sat(m, g, f.rhs());
      std::vector<char> bad(n, 0);
      bool changed = true;
      for (std::size_t s = 0; s < n; ++s) bad[s] = !b[s];
      while (changed) {
        changed = false;
        for (std::size_t s = 0; s < n; ++s) {
          if (bad[s] || a[s]) continue;
          bool escape = g.out[s].empty();
          for (std::size_t k : g.out[s]) escape = escape || bad[g.steps[k].target];
          if (escape) {
            bad[s] = 1;
            changed = true;
          }
        }
      }
      for (std::size_t s = 0; s < n; ++s) out[s] = !bad[s];
      return out;
    }
    case TctlKind::Freeze: {
      const auto a = tctl_sat(m, g, f.lhs());
      const auto& ft = g.freeze_target.at(freeze_position(m, g, f.name));
      for (std::size_t s = 0; s < n; ++s) out[s] = a[ft[s]];
      return out;
    }
  }
  return out;
}

bool tctl_check(const Wta& m, const TolFormula& f, const OracleOptions& opts) {
  const TctlFormula t = to_tctl(f);
  check_binding(m, f);
  const ExplicitGraph g = discretize(m, f, opts);
  return tctl_sat(m, g, t)[g.initial];
}

namespace {

std::uint64_t min_grade(const TolFormula& f) {
  std::uint64_t g = std::numeric_limits<std::uint64_t>::max();
  std::function<void(const TolFormula&)> walk = [&](const TolFormula& h) {
    switch (h.kind()) {
      case FormulaKind::Until:
      case FormulaKind::Release:
        g = std::min<std::uint64_t>(g, h.grade());
        walk(h.lhs());
        walk(h.rhs());
        break;
      case FormulaKind::And:
        walk(h.lhs());
        walk(h.rhs());
        break;
      case FormulaKind::Not:
      case FormulaKind::Freeze:
        walk(h.lhs());
        break;
      default:
        break;
    }
  };
  walk(f);
  return g;
}

bool admissible(const Wta& m, const DemonStrategy& s, std::uint64_t budget) {
  if (s.size() != m.locations.size()) return false;
  for (std::size_t l = 0; l < s.size(); ++l) {
    const auto& out = m.out_edges(l);
    std::uint64_t w = 0;
    for (std::size_t e : s[l]) {
      if (std::find(out.begin(), out.end(), e) == out.end()) return false;
      w += m.edges[e].weight;
    }
    std::set<std::size_t> distinct(s[l].begin(), s[l].end());
    if (!out.empty() && distinct.size() >= out.size()) return false;
    if (w > budget) return false;
  }
  return true;
}

bool witnesses_on(const Wta& m, const ExplicitGraph& g, const TolFormula& f,
                  const DemonStrategy& s) {
  std::vector<std::vector<char>> off(m.locations.size(), std::vector<char>(m.edges.size(), 0));
  for (std::size_t l = 0; l < s.size(); ++l) {
    for (std::size_t e : s[l]) off[l][e] = 1;
  }
  StepPredicate pruned_ax = [&](std::size_t st, const std::vector<char>& y) {
    bool some = false;
    for (std::size_t k : g.out[st]) {
      const ExplicitStep& step = g.steps[k];
      if (off[g.states[st].location][step.edge]) continue;
      if (!y[step.target]) return false;
      some = true;
    }
    return some;
  };
  Evaluator ev(m, g, [&](std::uint32_t) { return pruned_ax; });
  return ev.eval(f)[g.initial];
}

}  // namespace

bool strategy_witnesses(const Wta& m, const TolFormula& f, const DemonStrategy& s,
                        const OracleOptions& opts) {
  check_binding(m, f);
  if (!admissible(m, s, min_grade(f))) return false;
  const ExplicitGraph g = discretize(m, f, opts);
  return witnesses_on(m, g, f, s);
}

std::vector<DemonStrategy> enumerate_witnesses(const Wta& m, const TolFormula& f,
                                               const OracleOptions& opts) {
  check_binding(m, f);
  const std::uint64_t budget = min_grade(f);
  const ExplicitGraph g = discretize(m, f, opts);
  std::vector<std::vector<std::vector<std::size_t>>> per_loc;
  double product = 1;
  for (std::size_t l = 0; l < m.locations.size(); ++l) {
    per_loc.push_back(demon_choices(m, l, budget));
    product *= static_cast<double>(per_loc.back().size());
  }
  if (product > 1e6) throw OracleScaleError("too many memoryless strategies to enumerate");
  std::vector<DemonStrategy> found;
  DemonStrategy cur(m.locations.size());
  std::function<void(std::size_t)> rec = [&](std::size_t l) {
    if (l == per_loc.size()) {
      if (witnesses_on(m, g, f, cur)) found.push_back(cur);
      return;
    }
    for (const auto& d : per_loc[l]) {
      cur[l] = d;
      rec(l + 1);
    }
  };
  rec(0);
  return found;
}

// ---------------------------------------------------------------------------
// Differential harness

namespace {

std::string state_str(const Wta& m, const ExplicitGraph& g, const ExplicitState& s) {
  std::ostringstream os;
  os << m.locations[s.location].id << " (";
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    if (i) os << ", ";
    os << g.clock_names[i] << "=" << s.values[i] << "/" << g.denom;
  }
  os << ")";
  return os.str();
}

}  // namespace

std::string DiffReport::str() const {
  std::ostringstream os;
  os << (agree ? "AGREE" : "DISAGREE") << "\n";
  os << "checker: " << (checker_verdict ? "SAT" : "UNSAT") << "\n";
  os << "oracle: " << (oracle_verdict ? "SAT" : "UNSAT") << "\n";
  os << "root state mismatches: " << state_mismatches << "\n";
  if (minimal_subformula) {
    os << "minimal failing subformula: " << *minimal_subformula << "\n" << detail;
  }
  return os.str();
}

DiffReport differential(const Wta& m, const TolFormula& f, const CheckOptions& copts,
                        const OracleOptions& oopts) {
  check_binding(m, f);
  return differential(m, f, discretize(m, f, oopts), copts);
}

DiffReport differential(const Wta& m, const TolFormula& f, const ExplicitGraph& g,
                        const CheckOptions& copts) {
  DiffReport r;
  Checker ch(m, f, copts);
  const Verdict v = ch.run();
  r.checker_verdict = v.satisfied;
  r.checker_stats = v.stats;

  const auto& names = ch.space().names();
  std::vector<std::size_t> coord;
  for (std::size_t i = 1; i < names.size(); ++i) coord.push_back(clock_position(g, names[i]));
  auto project = [&](const ExplicitState& st) {
    std::vector<std::int64_t> v(coord.size());
    for (std::size_t i = 0; i < coord.size(); ++i) v[i] = st.values[coord[i]];
    return v;
  };

  auto cache = std::make_shared<std::map<std::uint32_t, Masks>>();
  Evaluator ev = game_evaluator(m, g, cache);
  r.oracle_verdict = ev.eval(f)[g.initial];

  for (const TolFormula& psi : subformulas_by_size(f)) {
    const Federation& fed = v.sat_sets.at(psi);
    const std::vector<char>& os = ev.eval(psi);
    std::vector<std::size_t> bad;
    for (std::size_t s = 0; s < g.states.size(); ++s) {
      const bool sym = fed.contains(g.states[s].location, project(g.states[s]), g.denom);
      if (sym != static_cast<bool>(os[s])) bad.push_back(s);
    }
    if (psi == f) r.state_mismatches = bad.size();
    if (!bad.empty() && !r.minimal_subformula) {
      r.minimal_subformula = psi.str();
      std::ostringstream d;
      d << "checker Sat:\n" << dump_sat(ch.space(), fed) << "differing states:\n";
      for (std::size_t k = 0; k < bad.size() && k < 12; ++k) {
        d << "  " << state_str(m, g, g.states[bad[k]]) << " checker=" << !os[bad[k]]
          << " oracle=" << static_cast<int>(os[bad[k]]) << "\n";
      }
      if (bad.size() > 12) d << "  ... " << bad.size() - 12 << " more\n";
      r.detail = d.str();
    }
  }
  r.agree = r.checker_verdict == r.oracle_verdict && r.state_mismatches == 0;
  return r;
}

}  // namespace tol
