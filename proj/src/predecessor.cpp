#include "tol/predecessor.hpp"

#include <algorithm>

#include "tol/error.hpp"

namespace tol {

StateSpace::StateSpace(const Wta& m, std::vector<std::string> formula_clocks) : m_(&m) {
  names_.push_back("0");
  for (const auto& c : m.clocks) names_.push_back(c);
  for (auto& j : formula_clocks) {
    if (std::find(names_.begin(), names_.end(), j) != names_.end()) {
      throw BindingError("formula clock '" + j + "' collides with an automaton clock");
    }
    names_.push_back(std::move(j));
  }
  const std::size_t d = dim();
  ceiling_.assign(d, 0);
  auto conj_atoms = [&](Dbm z, const std::vector<ClockAtom>& atoms) {
    for (const auto& a : atoms) {
      const auto cs = atom_constraints(a.clock + 1, a.op, a.constant);
      z = z.conjoin(std::span<const DiffConstraint>(cs.data(), cs.size()));
      ceiling_[a.clock + 1] = std::max(ceiling_[a.clock + 1], a.constant);
    }
    return z;
  };
  for (const auto& loc : m.locations) invariants_.push_back(conj_atoms(Dbm::universe(d), loc.invariant));
  for (const auto& e : m.edges) enabling_.push_back(conj_atoms(invariants_[e.source], e.guard));
}

std::size_t StateSpace::clock_index(const std::string& name) const {
  for (std::size_t i = 1; i < names_.size(); ++i) {
    if (names_[i] == name) return i;
  }
  return 0;
}

Federation StateSpace::universe() const {
  Federation f(locations(), dim());
  for (std::size_t l = 0; l < locations(); ++l) f.add(l, invariants_[l]);
  return f;
}

Federation StateSpace::clip(const Federation& f) const {
  Federation out(locations(), dim());
  for (std::size_t l = 0; l < locations(); ++l) {
    for (const auto& z : f.at(l)) out.add(l, z.intersect(invariants_[l]));
  }
  return out;
}

Dbm atom_zone(std::size_t dim, std::size_t index, CmpOp op, std::int32_t c) {
  const auto cs = atom_constraints(index, op, c);
  return Dbm::universe(dim).conjoin(std::span<const DiffConstraint>(cs.data(), cs.size()));
}

Federation disc_pred(const StateSpace& s, std::size_t e, const Federation& target) {
  const Edge& edge = s.model().edges.at(e);
  const Dbm& inv_tgt = s.invariant(edge.target);
  std::vector<DiffConstraint> zeroed;
  for (std::size_t r : edge.resets) {
    zeroed.push_back({r + 1, 0, Bound::le_zero()});
    zeroed.push_back({0, r + 1, Bound::le_zero()});
  }
  Federation out = s.empty();
  for (const auto& z : target.at(edge.target)) {
    Dbm post = z.intersect(inv_tgt).conjoin(zeroed);
    if (post.is_empty()) continue;
    for (std::size_t r : edge.resets) post = post.free(r + 1);
    out.add(edge.source, post.intersect(s.enabling(e)));
  }
  out.reduce();
  return out;
}

Federation time_pred(const StateSpace& s, const Federation& target) {
  Federation out = s.empty();
  for (std::size_t l = 0; l < s.locations(); ++l) {
    const Dbm& inv = s.invariant(l);
    for (const auto& z : target.at(l)) {
      const Dbm in = z.intersect(inv);
      if (in.is_empty()) continue;
      out.add(l, in.down().intersect(inv));
    }
  }
  out.reduce();
  return out;
}

Federation pred(const StateSpace& s, std::size_t e, const Federation& target) {
  return time_pred(s, disc_pred(s, e, target));
}

Federation pred_union(const StateSpace& s, const Federation& target) {
  Federation out = s.empty();
  for (std::size_t e = 0; e < s.model().edges.size(); ++e) out.add(pred(s, e, target));
  out.reduce();
  return out;
}

namespace {

/// Rewrites a zone list as pairwise disjoint zones with the same union.
std::vector<Dbm> disjoint(const std::vector<Dbm>& zs) {
  std::vector<Dbm> out;
  for (const auto& z : zs) {
    for (auto& piece : subtract_all({z}, out)) out.push_back(std::move(piece));
  }
  return out;
}

bool within_budget(std::uint64_t cost, std::uint64_t n, const ObstructionVariant& v) {
  return v.strict_cost ? cost < n : cost <= n;
}

struct EdgeSets {
  std::vector<Dbm> escape;  // disjoint
  std::vector<Dbm> reach;
};

std::vector<EscapeProfile> profiles_from(std::size_t l, std::uint64_t n,
                                         const std::vector<std::size_t>& edges,
                                         const std::vector<EdgeSets>& sets,
                                         const std::vector<std::uint32_t>& weights,
                                         const Federation& universe,
                                         const ObstructionVariant& variant) {
  std::vector<EscapeProfile> cells;
  for (const auto& z : universe.at(l)) cells.push_back({l, z, {}, 0});
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const auto& esc = sets[k].escape;
    if (esc.empty()) continue;
    std::vector<EscapeProfile> next;
    for (auto& c : cells) {
      const std::uint64_t cost = c.escape_cost + weights[k];
      if (within_budget(cost, n, variant)) {
        for (const auto& d : esc) {
          Dbm in = c.cell.intersect(d);
          if (in.is_empty()) continue;
          EscapeProfile p{l, std::move(in), c.escaping_edges, cost};
          p.escaping_edges.push_back(edges[k]);
          next.push_back(std::move(p));
        }
      }
      for (auto& out : subtract_all({c.cell}, esc)) {
        next.push_back({l, std::move(out), c.escaping_edges, c.escape_cost});
      }
    }
    cells = std::move(next);
  }
  return cells;
}

std::vector<EdgeSets> edge_sets(const StateSpace& s, const std::vector<std::size_t>& edges,
                                const Federation& complement, const Federation* target) {
  std::vector<EdgeSets> out;
  for (std::size_t e : edges) {
    const std::size_t src = s.model().edges[e].source;
    EdgeSets es;
    es.escape = disjoint(pred(s, e, complement).at(src));
    if (target) es.reach = pred(s, e, *target).at(src);
    out.push_back(std::move(es));
  }
  return out;
}

std::vector<std::uint32_t> weights_of(const StateSpace& s, const std::vector<std::size_t>& edges) {
  std::vector<std::uint32_t> w;
  for (std::size_t e : edges) w.push_back(s.model().edges[e].weight);
  return w;
}

}  // namespace

std::vector<EscapeProfile> escape_profiles(const StateSpace& s, std::size_t l, std::uint64_t n,
                                           const Federation& complement,
                                           const Federation& universe,
                                           const ObstructionVariant& variant) {
  const auto& edges = s.model().out_edges(l);
  return profiles_from(l, n, edges, edge_sets(s, edges, complement, nullptr), weights_of(s, edges),
                       universe, variant);
}

Federation obstruction_pred(const StateSpace& s, std::uint64_t n, const Federation& target,
                            const Federation& universe, const ObstructionVariant& variant) {
  const Federation complement = fed_subtract(universe, target);
  Federation out = s.empty();
  for (std::size_t l = 0; l < s.locations(); ++l) {
    const auto& edges = s.model().out_edges(l);
    if (edges.empty() || universe.at(l).empty()) continue;
    const auto sets = edge_sets(s, edges, complement, &target);
    const auto cells = profiles_from(l, n, edges, sets, weights_of(s, edges), universe, variant);
    for (const auto& c : cells) {
      for (std::size_t k = 0; k < edges.size(); ++k) {
        const bool escaping = std::find(c.escaping_edges.begin(), c.escaping_edges.end(),
                                        edges[k]) != c.escaping_edges.end();
        if (escaping && !variant.drop_witness) continue;
        for (const auto& r : sets[k].reach) out.add(l, c.cell.intersect(r));
      }
    }
  }
  out.reduce();
  return out;
}

}  // namespace tol
