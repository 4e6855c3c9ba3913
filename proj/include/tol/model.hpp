#pragma once

// Weighted timed automata: data model, text format, and validation.

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tol/dbm.hpp"

namespace tol {

class TolFormula;

/// `clock op constant`; `clock` indexes Wta::clocks (0-based).
struct ClockAtom {
  std::size_t clock = 0;
  CmpOp op = CmpOp::le;
  std::int32_t constant = 0;

  bool operator==(const ClockAtom&) const = default;
};

struct Location {
  std::string id;
  std::vector<ClockAtom> invariant;
  /// Sorted, without duplicates.
  std::vector<std::string> labels;
  bool is_goal = false;

  bool operator==(const Location&) const = default;
};

struct Edge {
  std::size_t source = 0;
  std::string action;
  std::vector<ClockAtom> guard;
  /// Sorted clock indices.
  std::vector<std::size_t> resets;
  std::size_t target = 0;
  std::uint32_t weight = 0;

  bool operator==(const Edge&) const = default;
};

class Wta {
 public:
  std::vector<Location> locations;
  std::size_t initial = 0;
  std::vector<std::string> clocks;
  /// Sorted action names, collected from the edges.
  std::vector<std::string> actions;
  std::vector<Edge> edges;

  /// Checks every structural invariant and rebuilds the per-location edge
  /// index. Generators call this after filling the public fields.
  void validate();

  std::size_t location_index(const std::string& id) const;
  /// Index of a clock, or clocks.size() if undeclared.
  std::size_t find_clock(const std::string& name) const;
  /// Edge indices leaving `l`, in declaration order.
  const std::vector<std::size_t>& out_edges(std::size_t l) const { return out_.at(l); }
  /// True for labels of `l`, plus the conventional `goal` on goal locations.
  bool has_label(std::size_t l, const std::string& p) const;

  bool operator==(const Wta& other) const;

 private:
  std::vector<std::vector<std::size_t>> out_;
};

Wta parse_model(const std::string& text);
std::string serialize(const Wta& m);

/// All edges leaving location `l`, in declaration order.
std::vector<Edge> edges_from(const Wta& m, const std::string& l);

/// Largest constant each clock is compared against in m and f. Keys cover
/// every automaton clock and every formula clock.
std::map<std::string, std::int32_t> max_constants(const Wta& m, const TolFormula& f);

std::string atom_str(const Wta& m, const ClockAtom& a);

}  // namespace tol
