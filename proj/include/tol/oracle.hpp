#pragma once

// Explicit-state reference semantics.
//
// The oracle builds a finite graph of canonical valuations and decides TOL
// by brute force over demon choices. It shares no code with the zone-based
// checker beyond the model and formula front ends.
//
// Valuations are integers scaled by `denom`. Clocks are reduced to one
// representative per clock region: fractional parts are replaced by their
// rank among the distinct nonzero fractions, and a clock beyond its maximal
// constant k is pinned to k + 1/2. Delays are explored in steps of
// 1/denom, which visits every region along the delay line because distinct
// canonical fractions are at least 2/denom apart.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tol/checker.hpp"
#include "tol/logic.hpp"
#include "tol/model.hpp"

namespace tol {

struct OracleOptions {
  std::size_t state_cap = 2'000'000;
};

struct ExplicitState {
  std::size_t location = 0;
  /// Automaton clocks in declaration order, then formula clocks.
  std::vector<std::int64_t> values;

  bool operator==(const ExplicitState&) const = default;
};

struct ExplicitStep {
  std::size_t source = 0;
  std::size_t edge = 0;
  std::size_t target = 0;
};

struct ExplicitGraph {
  std::int64_t denom = 1;
  std::vector<std::string> clock_names;
  std::vector<std::int32_t> caps;
  std::vector<ExplicitState> states;
  std::vector<ExplicitStep> steps;
  /// Step indices leaving each state.
  std::vector<std::vector<std::size_t>> out;
  /// freeze_target[k][s]: state s with formula clock k set to 0.
  std::vector<std::vector<std::size_t>> freeze_target;
  std::size_t initial = 0;
};

ExplicitGraph discretize(const Wta& m, const TolFormula& f, const OracleOptions& opts = {});

/// Subsets of the edges leaving `l` a demon with budget `n` may deactivate:
/// strict subsets with total weight at most n. Each entry lists edge indices.
std::vector<std::vector<std::size_t>> demon_choices(const Wta& m, std::size_t l, std::uint64_t n);

/// Per-state truth of f on the explicit graph.
std::vector<char> oracle_sat(const Wta& m, const ExplicitGraph& g, const TolFormula& f);
bool oracle_check(const Wta& m, const TolFormula& f, const OracleOptions& opts = {});

/// Textbook CTL-style evaluation with A-quantified until/release. A state
/// with no successor satisfies AX of nothing.
std::vector<char> tctl_sat(const Wta& m, const ExplicitGraph& g, const TctlFormula& f);
bool tctl_check(const Wta& m, const TolFormula& f, const OracleOptions& opts = {});

/// Location-memoryless demon strategy: deactivated edges per location.
using DemonStrategy = std::vector<std::vector<std::size_t>>;

/// True if `s` is within the budget of every strategic operator in f, and f
/// holds at the initial state when each strategic operator is read as A on
/// the graph pruned by s.
bool strategy_witnesses(const Wta& m, const TolFormula& f, const DemonStrategy& s,
                        const OracleOptions& opts = {});
/// All location-memoryless strategies that witness f.
std::vector<DemonStrategy> enumerate_witnesses(const Wta& m, const TolFormula& f,
                                               const OracleOptions& opts = {});

struct DiffReport {
  bool agree = true;
  bool checker_verdict = false;
  bool oracle_verdict = false;
  /// Explicit states on which the root Sat sets differ.
  std::size_t state_mismatches = 0;
  /// Smallest subformula whose Sat sets differ on some explicit state.
  std::optional<std::string> minimal_subformula;
  /// Checker Sat dump and differing states for the minimal subformula.
  std::string detail;
  Stats checker_stats;

  std::string str() const;
};

DiffReport differential(const Wta& m, const TolFormula& f, const CheckOptions& copts = {},
                        const OracleOptions& oopts = {});
/// Same, on a prebuilt graph. `g` must carry every clock of f and caps at
/// least the max constants of (m, f); extra clocks are ignored.
DiffReport differential(const Wta& m, const TolFormula& f, const ExplicitGraph& g,
                        const CheckOptions& copts = {});

}  // namespace tol
