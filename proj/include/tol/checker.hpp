#pragma once

// Symbolic TOL model checking: bottom-up labeling with backward fixpoints.

#include <cstddef>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tol/dbm.hpp"
#include "tol/logic.hpp"
#include "tol/model.hpp"
#include "tol/predecessor.hpp"

namespace tol {

struct CheckOptions {
  /// Normalize every fixpoint iterate against the per-clock max constants.
  bool extrapolate = true;
  /// Check inclusion between consecutive iterates and record the outcome in
  /// the stats. Costs one federation inclusion test per iteration.
  bool verify_monotone = false;
  ObstructionVariant variant;
};

struct FixpointStats {
  std::string formula;
  std::size_t iterations = 0;
  /// False if some iterate broke the expected inclusion chain. Only
  /// meaningful with CheckOptions::verify_monotone.
  bool monotone = true;
  std::size_t peak_zones = 0;
};

struct Stats {
  std::vector<FixpointStats> fixpoints;
  std::uint64_t zones_created = 0;
  std::size_t peak_federation = 0;
  /// Upper bound on the iterations of one fixpoint: locations times the
  /// number of clock regions, plus the confirming pass. Saturates at
  /// UINT64_MAX.
  std::uint64_t iteration_bound = 0;
  double wall_ms = 0;
};

/// Satisfaction sets keyed by subformula text, in insertion order.
class SatMap {
 public:
  void set(const TolFormula& f, Federation s);
  bool contains(const TolFormula& f) const { return index_.count(f.str()) != 0; }
  const Federation& at(const TolFormula& f) const;
  const std::vector<std::pair<TolFormula, Federation>>& entries() const { return entries_; }

 private:
  std::vector<std::pair<TolFormula, Federation>> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct Verdict {
  bool satisfied = false;
  SatMap sat_sets;
  Stats stats;
};

/// Rejects clock atoms that name neither an automaton clock nor an enclosing
/// freeze binder, and freeze binders that reuse an automaton clock name.
void check_binding(const Wta& m, const TolFormula& f);

class Checker {
 public:
  Checker(const Wta& m, const TolFormula& f, CheckOptions opts = {});

  const StateSpace& space() const { return space_; }
  const Stats& stats() const { return stats_; }

  Verdict run();

  Federation sat_atom(const TolFormula& psi) const;
  Federation sat_until(std::uint64_t n, const Federation& s1, const Federation& s2,
                       const std::string& label = "");
  Federation sat_release(std::uint64_t n, const Federation& s1, const Federation& s2,
                         const std::string& label = "");
  Federation sat_freeze(const std::string& j, const Federation& s) const;

  /// Membership of (l0, all clocks 0).
  bool holds_initially(const Federation& s) const;

 private:
  Federation normalize(const Federation& f) const;
  void note(const Federation& f);

  const Wta& m_;
  TolFormula f_;
  CheckOptions opts_;
  StateSpace space_;
  Federation universe_;
  Stats stats_;
};

Verdict check(const Wta& m, const TolFormula& f, const CheckOptions& opts = {});

/// One line per zone, `<location> | <constraints>`, ordered by location and
/// then by constraint text.
std::string dump_sat(const StateSpace& s, const Federation& f);

}  // namespace tol
