#include "tol/checker.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <limits>
#include <sstream>

#include "tol/error.hpp"

namespace tol {

void SatMap::set(const TolFormula& f, Federation s) {
  auto it = index_.find(f.str());
  if (it != index_.end()) {
    entries_[it->second].second = std::move(s);
    return;
  }
  index_.emplace(f.str(), entries_.size());
  entries_.emplace_back(f, std::move(s));
}

const Federation& SatMap::at(const TolFormula& f) const {
  auto it = index_.find(f.str());
  if (it == index_.end()) throw LookupError("no satisfaction set for " + f.str());
  return entries_[it->second].second;
}

void check_binding(const Wta& m, const TolFormula& f) {
  std::vector<std::string> bound;
  std::function<void(const TolFormula&)> walk = [&](const TolFormula& g) {
    switch (g.kind()) {
      case FormulaKind::ClockAtom:
        if (m.find_clock(g.name()) == m.clocks.size() &&
            std::find(bound.begin(), bound.end(), g.name()) == bound.end()) {
          throw BindingError("clock atom '" + g.str() + "' names an unbound clock");
        }
        break;
      case FormulaKind::Freeze:
        if (m.find_clock(g.name()) != m.clocks.size()) {
          throw BindingError("freeze identifier '" + g.name() + "' is an automaton clock");
        }
        bound.push_back(g.name());
        walk(g.lhs());
        bound.pop_back();
        break;
      case FormulaKind::Not:
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
}

namespace {

std::uint64_t region_bound(std::size_t locations, const std::vector<std::int32_t>& ceiling) {
  long double b = static_cast<long double>(locations);
  const std::size_t n = ceiling.size() - 1;
  for (std::size_t i = 1; i <= n; ++i) b *= static_cast<long double>(i) * 2.0L *
                                            (2.0L * ceiling[i] + 2.0L);
  // Each strict step adds or removes at least one region; one more pass
  // confirms stability.
  b += 1.0L;
  const long double cap = static_cast<long double>(std::numeric_limits<std::uint64_t>::max());
  return b >= cap ? std::numeric_limits<std::uint64_t>::max() : static_cast<std::uint64_t>(b);
}

}  // namespace

Checker::Checker(const Wta& m, const TolFormula& f, CheckOptions opts)
    : m_(m), f_(f), opts_(opts), space_((check_binding(m, f), m), formula_clocks(f)) {
  std::vector<std::int32_t> ceiling(space_.dim(), 0);
  for (const auto& [clock, c] : max_constants(m, f)) {
    const std::size_t i = space_.clock_index(clock);
    if (i != 0) ceiling[i] = c;
  }
  space_.set_ceiling(std::move(ceiling));
  universe_ = space_.universe();
  stats_.iteration_bound = region_bound(space_.locations(), space_.ceiling());
}

void Checker::note(const Federation& f) {
  stats_.zones_created += f.size();
  stats_.peak_federation = std::max(stats_.peak_federation, f.size());
}

Federation Checker::normalize(const Federation& f) const {
  if (!opts_.extrapolate) return f;
  return space_.clip(f.extrapolate(space_.ceiling()));
}

Federation Checker::sat_atom(const TolFormula& psi) const {
  Federation out = space_.empty();
  switch (psi.kind()) {
    case FormulaKind::True:
      return universe_;
    case FormulaKind::Atom:
      for (std::size_t l = 0; l < space_.locations(); ++l) {
        if (m_.has_label(l, psi.name())) out.add(l, space_.invariant(l));
      }
      return out;
    case FormulaKind::ClockAtom: {
      const std::size_t i = space_.clock_index(psi.name());
      if (i == 0) throw BindingError("clock atom '" + psi.str() + "' names an unbound clock");
      const Dbm a = atom_zone(space_.dim(), i, psi.op(), psi.constant());
      for (std::size_t l = 0; l < space_.locations(); ++l) {
        out.add(l, space_.invariant(l).intersect(a));
      }
      return out;
    }
    default:
      throw Error("sat_atom called on a compound formula");
  }
}

Federation Checker::sat_until(std::uint64_t n, const Federation& s1, const Federation& s2,
                              const std::string& label) {
  FixpointStats fs{label, 0, true, 0};
  Federation x = space_.empty();
  while (true) {
    Federation y = s2.unite(s1.intersect(obstruction_pred(space_, n, x, universe_, opts_.variant)));
    y = normalize(y);
    ++fs.iterations;
    fs.peak_zones = std::max(fs.peak_zones, y.size());
    note(y);
    if (opts_.verify_monotone && !x.subset_of(y)) fs.monotone = false;
    const bool done = y.equals(x);
    x = std::move(y);
    if (done) break;
  }
  stats_.fixpoints.push_back(fs);
  return x;
}

Federation Checker::sat_release(std::uint64_t n, const Federation& s1, const Federation& s2,
                                const std::string& label) {
  FixpointStats fs{label, 0, true, 0};
  Federation x = universe_;
  while (true) {
    Federation y = s2.intersect(s1.unite(obstruction_pred(space_, n, x, universe_, opts_.variant)));
    y = normalize(y);
    ++fs.iterations;
    fs.peak_zones = std::max(fs.peak_zones, y.size());
    note(y);
    if (opts_.verify_monotone && !y.subset_of(x)) fs.monotone = false;
    const bool done = y.equals(x);
    x = std::move(y);
    if (done) break;
  }
  stats_.fixpoints.push_back(fs);
  return x;
}

Federation Checker::sat_freeze(const std::string& j, const Federation& s) const {
  const std::size_t i = space_.clock_index(j);
  if (i == 0) throw BindingError("unknown formula clock '" + j + "'");
  const Dbm zero_j = atom_zone(space_.dim(), i, CmpOp::eq, 0);
  Federation out = space_.empty();
  for (std::size_t l = 0; l < space_.locations(); ++l) {
    for (const auto& z : s.at(l)) out.add(l, z.intersect(zero_j).free(i));
  }
  out.reduce();
  return out;
}

bool Checker::holds_initially(const Federation& s) const {
  const std::vector<std::int64_t> zeros(space_.dim() - 1, 0);
  return s.contains(m_.initial, zeros, 1);
}

Verdict Checker::run() {
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  for (const TolFormula& psi : subformulas_by_size(f_)) {
    Federation s;
    switch (psi.kind()) {
      case FormulaKind::True:
      case FormulaKind::Atom:
      case FormulaKind::ClockAtom:
        s = sat_atom(psi);
        break;
      case FormulaKind::Not:
        s = fed_subtract(universe_, v.sat_sets.at(psi.lhs()));
        break;
      case FormulaKind::And:
        s = v.sat_sets.at(psi.lhs()).intersect(v.sat_sets.at(psi.rhs()));
        break;
      case FormulaKind::Until:
        s = sat_until(psi.grade(), v.sat_sets.at(psi.lhs()), v.sat_sets.at(psi.rhs()), psi.str());
        break;
      case FormulaKind::Release:
        s = sat_release(psi.grade(), v.sat_sets.at(psi.lhs()), v.sat_sets.at(psi.rhs()),
                        psi.str());
        break;
      case FormulaKind::Freeze:
        s = sat_freeze(psi.name(), v.sat_sets.at(psi.lhs()));
        break;
    }
    note(s);
    v.sat_sets.set(psi, std::move(s));
  }
  v.satisfied = holds_initially(v.sat_sets.at(f_));
  stats_.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  v.stats = stats_;
  return v;
}

Verdict check(const Wta& m, const TolFormula& f, const CheckOptions& opts) {
  return Checker(m, f, opts).run();
}

std::string dump_sat(const StateSpace& s, const Federation& f) {
  std::ostringstream os;
  for (std::size_t l = 0; l < f.locations(); ++l) {
    std::vector<std::string> lines;
    for (const auto& z : f.at(l)) lines.push_back(z.constraint_list(s.names()));
    std::sort(lines.begin(), lines.end());
    for (const auto& c : lines) os << s.model().locations[l].id << " | " << c << '\n';
  }
  return os.str();
}

}  // namespace tol
