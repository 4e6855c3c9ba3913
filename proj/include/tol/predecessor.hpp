#pragma once

// One-step symbolic predecessors over a WTA extended with formula clocks.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "tol/dbm.hpp"
#include "tol/model.hpp"

namespace tol {

/// The symbolic state space of a WTA whose valuations also carry formula
/// clocks. Matrix index 0 is the reference clock, 1..|X| are the automaton
/// clocks in declaration order, and the formula clocks follow.
class StateSpace {
 public:
  StateSpace(const Wta& m, std::vector<std::string> formula_clocks);

  const Wta& model() const { return *m_; }
  std::size_t dim() const { return names_.size(); }
  std::size_t locations() const { return m_->locations.size(); }
  /// Matrix index of a clock name, or 0 if unknown.
  std::size_t clock_index(const std::string& name) const;
  /// names()[i] names matrix index i; names()[0] is "0".
  const std::vector<std::string>& names() const { return names_; }

  /// I(l) as a zone.
  const Dbm& invariant(std::size_t l) const { return invariants_[l]; }
  /// guard(e) conjoined with I(source(e)).
  const Dbm& enabling(std::size_t e) const { return enabling_[e]; }
  /// Constants per matrix index used for extrapolation; entry 0 is 0.
  const std::vector<std::int32_t>& ceiling() const { return ceiling_; }
  void set_ceiling(std::vector<std::int32_t> c) { ceiling_ = std::move(c); }

  /// Every invariant-satisfying state.
  Federation universe() const;
  Federation empty() const { return Federation(locations(), dim()); }
  /// Clips every zone to the invariant of its location.
  Federation clip(const Federation& f) const;

 private:
  const Wta* m_;
  std::vector<std::string> names_;
  std::vector<Dbm> invariants_;
  std::vector<Dbm> enabling_;
  std::vector<std::int32_t> ceiling_;
};

/// Constraints of a single atom over matrix indices.
Dbm atom_zone(std::size_t dim, std::size_t index, CmpOp op, std::int32_t c);

/// States that take edge `e` (no delay) into `target`.
Federation disc_pred(const StateSpace& s, std::size_t e, const Federation& target);
/// States that reach `target` by delaying without leaving their invariant.
Federation time_pred(const StateSpace& s, const Federation& target);
/// States that delay, then take `e` into `target`.
Federation pred(const StateSpace& s, std::size_t e, const Federation& target);
/// Union of pred over all edges.
Federation pred_union(const StateSpace& s, const Federation& target);

/// A cell of a location's state space on which the set of escaping edges is
/// constant.
struct EscapeProfile {
  std::size_t location = 0;
  Dbm cell = Dbm::universe(1);
  std::vector<std::size_t> escaping_edges;
  std::uint64_t escape_cost = 0;
};

/// Knobs for deliberately broken variants of the obstruction predecessor,
/// used by the mutation tests.
struct ObstructionVariant {
  /// Compare escape cost with `< n` instead of `<= n`.
  bool strict_cost = false;
  /// Accept any edge into the target as witness, escaping or not.
  bool drop_witness = false;
};

/// Partition of `universe` at `l` by escaping-edge set, keeping only cells
/// whose escape cost is within budget `n`.
std::vector<EscapeProfile> escape_profiles(const StateSpace& s, std::size_t l, std::uint64_t n,
                                           const Federation& complement,
                                           const Federation& universe,
                                           const ObstructionVariant& variant = {});

/// States from which a demon spending at most `n` can make every next
/// discrete step land in `target` while at least one such step remains.
Federation obstruction_pred(const StateSpace& s, std::uint64_t n, const Federation& target,
                            const Federation& universe, const ObstructionVariant& variant = {});

}  // namespace tol
