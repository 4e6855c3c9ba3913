#include <doctest.h>

#include <algorithm>
#include <random>

#include "corpus.hpp"
#include "tol/bench.hpp"
#include "tol/oracle.hpp"
#include "tol/predecessor.hpp"

using namespace tol;

namespace {

// Sample points are half-integers; delays are searched on the quarter grid.
constexpr std::int64_t kDenom = 4;

bool atom_holds(std::int64_t v, CmpOp op, std::int64_t c) {
  const std::int64_t cc = c * kDenom;
  switch (op) {
    case CmpOp::lt: return v < cc;
    case CmpOp::le: return v <= cc;
    case CmpOp::eq: return v == cc;
    case CmpOp::ge: return v >= cc;
    case CmpOp::gt: return v > cc;
  }
  return false;
}

bool atoms_hold(const std::vector<ClockAtom>& atoms, const std::vector<std::int64_t>& v) {
  for (const auto& a : atoms) {
    if (!atom_holds(v[a.clock], a.op, a.constant)) return false;
  }
  return true;
}

// Delay d, then edge e, into `target`. `v` covers automaton clocks then
// formula clocks; formula clocks are never reset by edges.
bool brute_pred(const StateSpace& s, std::size_t e, const Federation& target,
                const std::vector<std::int64_t>& v, std::int64_t max_delay) {
  const Wta& m = s.model();
  const Edge& edge = m.edges[e];
  std::vector<std::int64_t> w(v.size());
  for (std::int64_t d = 0; d <= max_delay; ++d) {
    for (std::size_t c = 0; c < v.size(); ++c) w[c] = v[c] + d;
    if (!atoms_hold(m.locations[edge.source].invariant, v)) return false;
    if (!atoms_hold(m.locations[edge.source].invariant, w)) continue;
    if (!atoms_hold(edge.guard, w)) continue;
    for (std::size_t r : edge.resets) w[r] = 0;
    if (!atoms_hold(m.locations[edge.target].invariant, w)) continue;
    if (target.contains(edge.target, w, kDenom)) return true;
  }
  return false;
}

// Calls f(v) for every half-integer point in [0, hi]^n (scaled by kDenom).
template <class F>
void for_each_point(std::size_t n, std::int64_t hi, F&& f) {
  std::vector<std::int64_t> v(n, 0);
  for (;;) {
    f(v);
    std::size_t c = 0;
    while (c < n) {
      v[c] += kDenom / 2;
      if (v[c] <= hi * kDenom) break;
      v[c] = 0;
      ++c;
    }
    if (c == n) return;
  }
}

Federation random_target(std::mt19937_64& rng, const StateSpace& s) {
  Federation f = s.empty();
  std::uniform_int_distribution<int> coin(0, 2), c(0, testing::kMaxConst);
  for (std::size_t l = 0; l < s.locations(); ++l) {
    if (coin(rng) == 0) continue;
    Dbm d = Dbm::universe(s.dim());
    for (std::size_t i = 1; i < s.dim(); ++i) {
      if (coin(rng) == 0) d = d.conjoin(DiffConstraint{i, 0, Bound::weak(c(rng))});
      if (coin(rng) == 0) d = d.conjoin(DiffConstraint{0, i, Bound::strict(-c(rng))});
    }
    f.add(l, d);
  }
  return s.clip(f);
}

Wta untimed(std::mt19937_64& rng) {
  for (;;) {
    Wta m = testing::random_model(rng);
    if (m.clocks.empty()) return m;
  }
}

Federation locations(const StateSpace& s, std::uint32_t mask) {
  Federation f = s.empty();
  for (std::size_t l = 0; l < s.locations(); ++l) {
    if (mask >> l & 1) f.add(l, Dbm::universe(s.dim()));
  }
  return f;
}

// Explicit demon predecessor on an untimed model: some allowed choice leaves
// a non-empty set of live edges, all of them into the target.
bool brute_obstruction(const Wta& m, std::size_t l, std::uint64_t n, std::uint32_t target_mask) {
  for (const auto& choice : demon_choices(m, l, n)) {
    bool some = false, all_in = true;
    for (std::size_t e : m.out_edges(l)) {
      if (std::find(choice.begin(), choice.end(), e) != choice.end()) continue;
      some = true;
      all_in &= (target_mask >> m.edges[e].target & 1) != 0;
    }
    if (some && all_in) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("disc_pred") {
  const Wta m = parse_model(
      "wta\nclocks x y\nlocation l0 init invariant y <= 6\nlocation l1 invariant x <= 1\n"
      "edge l0 -> l1 action a guard x <= 2 reset x weight 1\n");
  const StateSpace s(m, {});
  CHECK(disc_pred(s, 0, s.empty()).is_empty());

  Federation full = s.empty();
  full.add(1, s.invariant(1));
  const Federation from_full = disc_pred(s, 0, full);
  Federation expect = s.empty();
  expect.add(0, s.enabling(0));
  CHECK(from_full.equals(expect));

  Federation target = s.empty();
  target.add(1, atom_zone(s.dim(), 2, CmpOp::ge, 3));
  const Federation got = disc_pred(s, 0, target);
  Federation want = s.empty();
  want.add(0, atom_zone(s.dim(), 1, CmpOp::le, 2).intersect(atom_zone(s.dim(), 2, CmpOp::ge, 3)));
  CHECK(got.equals(s.clip(want)));
  for_each_point(2, 8, [&](const std::vector<std::int64_t>& v) {
    const bool expect_in = v[0] <= 2 * kDenom && v[1] <= 6 * kDenom && v[1] >= 3 * kDenom;
    CHECK(got.contains(0, v, kDenom) == expect_in);
  });
}

TEST_CASE("time_pred") {
  const Wta m = parse_model("wta\nclocks x\nlocation l init invariant x <= 5\n");
  const StateSpace s(m, {});
  Federation t = s.empty();
  t.add(0, atom_zone(2, 1, CmpOp::eq, 5));
  Federation want = s.empty();
  want.add(0, atom_zone(2, 1, CmpOp::le, 5));
  const Federation tp = time_pred(s, t);
  CHECK(tp.equals(want));
  CHECK(time_pred(s, tp).equals(tp));
  Federation outside = s.empty();
  outside.add(0, atom_zone(2, 1, CmpOp::ge, 7));
  CHECK(time_pred(s, outside).is_empty());
}

TEST_CASE("pred on the 4-stage pipeline matches the point definition") {
  const Wta m = gen_pipeline(4).model;
  const StateSpace s(m, {"j"});
  const std::size_t s2 = m.location_index("s2");
  const std::size_t s3 = m.location_index("s3");
  std::size_t edge = m.edges.size();
  for (std::size_t e : m.out_edges(s2)) {
    if (m.edges[e].target == s3) edge = e;
  }
  REQUIRE(edge < m.edges.size());
  Federation target = s.empty();
  target.add(s3, atom_zone(s.dim(), s.clock_index("j"), CmpOp::ge, 12));
  target = s.clip(target);
  const Federation p = pred(s, edge, target);

  // x <= 4 and j - x >= 8 at s2.
  Federation want = s.empty();
  Dbm z = atom_zone(s.dim(), 1, CmpOp::le, 4);
  z = z.conjoin(DiffConstraint{1, 2, Bound::weak(-8)});
  want.add(s2, z);
  CHECK(p.equals(want));

  for_each_point(2, 16, [&](const std::vector<std::int64_t>& v) {
    CHECK(p.contains(s2, v, kDenom) == brute_pred(s, edge, target, v, 20 * kDenom));
  });
  CHECK(disc_pred(s, edge, target).subset_of(p));
  CHECK(pred(s, edge, s.empty()).is_empty());
}

TEST_CASE("pred matches the point definition on random models") {
  std::mt19937_64 rng(21);
  for (int iter = 0; iter < 60; ++iter) {
    const Wta m = testing::random_model(rng);
    const StateSpace s(m, {});
    const Federation target = random_target(rng, s);
    for (std::size_t e = 0; e < m.edges.size(); ++e) {
      const Federation p = pred(s, e, target);
      const std::size_t src = m.edges[e].source;
      for_each_point(m.clocks.size(), testing::kMaxConst + 1, [&](const std::vector<std::int64_t>& v) {
        CHECK_MESSAGE(p.contains(src, v, kDenom) == brute_pred(s, e, target, v, 6 * kDenom), serialize(m));
      });
    }
  }
}

TEST_CASE("pred_union") {
  const Wta one = parse_model(
      "wta\nclocks x\nlocation a init\nlocation b\nedge a -> b action go guard x >= 2 weight 1\n");
  const StateSpace s(one, {});
  const Federation u = s.universe();
  CHECK(pred_union(s, u).equals(pred(s, 0, u)));

  // Whole space: states with an edge enabled after some delay.
  std::mt19937_64 rng(5);
  for (int iter = 0; iter < 40; ++iter) {
    const Wta m = testing::random_model(rng);
    const StateSpace sp(m, {});
    const Federation all = pred_union(sp, sp.universe());
    for (std::size_t l = 0; l < m.locations.size(); ++l) {
      for_each_point(m.clocks.size(), testing::kMaxConst + 1, [&](const std::vector<std::int64_t>& v) {
        bool expect = false;
        for (std::size_t e : m.out_edges(l)) expect |= brute_pred(sp, e, sp.universe(), v, 6 * kDenom);
        CHECK(all.contains(l, v, kDenom) == expect);
      });
    }
  }
}

TEST_CASE("obstruction predecessor on a fan") {
  // l -> a costs 3, l -> b costs 2; blocking b forces the step into a.
  const Wta m = parse_model(
      "wta\nlocation l init\nlocation a\nlocation b\n"
      "edge l -> a action go weight 3\nedge l -> b action go weight 2\n");
  const StateSpace s(m, {});
  const Federation target = locations(s, 0b010);
  const Federation u = s.universe();
  CHECK(!obstruction_pred(s, 2, target, u).at(0).empty());
  CHECK(obstruction_pred(s, 1, target, u).at(0).empty());
  CHECK(brute_obstruction(m, 0, 2, 0b010));
  CHECK_FALSE(brute_obstruction(m, 0, 1, 0b010));
  // Forcing b instead needs the weight of the other edge.
  CHECK(obstruction_pred(s, 2, locations(s, 0b100), u).at(0).empty());
  CHECK(!obstruction_pred(s, 3, locations(s, 0b100), u).at(0).empty());
}

TEST_CASE("obstruction predecessor excludes cells with a costly escape") {
  const Wta m = parse_model(
      "wta\nclocks x\nlocation l init\nlocation good\nlocation bad\n"
      "edge l -> good action go weight 1\nedge l -> bad action go guard x <= 2 weight 1\n");
  const StateSpace s(m, {});
  const Federation u = s.universe();
  const Federation target = locations(s, 0b010);
  const Federation z0 = obstruction_pred(s, 0, target, u);
  // At grade 0 only the valuations where `bad` can no longer fire remain.
  Federation want = s.empty();
  want.add(0, atom_zone(2, 1, CmpOp::gt, 2));
  CHECK(z0.equals(want));
  CHECK(obstruction_pred(s, 1, target, u).equals(locations(s, 0b001)));
}

TEST_CASE("obstruction predecessor agrees with brute force on untimed models") {
  std::mt19937_64 rng(8);
  for (int iter = 0; iter < 200; ++iter) {
    const Wta m = untimed(rng);
    const StateSpace s(m, {});
    const Federation u = s.universe();
    std::uint64_t total = 0;
    for (const auto& e : m.edges) total += e.weight;
    for (std::uint32_t mask = 0; mask < (1u << m.locations.size()); ++mask) {
      const Federation t = locations(s, mask);
      for (std::uint64_t n = 0; n <= 4; ++n) {
        const Federation z = obstruction_pred(s, n, t, u);
        for (std::size_t l = 0; l < m.locations.size(); ++l) {
          CHECK_MESSAGE(!z.at(l).empty() == brute_obstruction(m, l, n, mask), serialize(m));
        }
      }
      CHECK(obstruction_pred(s, total, t, u).equals(pred_union(s, t)));
    }
  }
}

TEST_CASE("obstruction predecessor is monotone and within Pred") {
  std::mt19937_64 rng(13);
  for (int iter = 0; iter < 120; ++iter) {
    const Wta m = testing::random_model(rng);
    const StateSpace s(m, {});
    const Federation u = s.universe();
    const Federation t1 = random_target(rng, s);
    const Federation t2 = t1.unite(random_target(rng, s));
    const Federation pu = pred_union(s, t1);
    Federation prev = s.empty();
    for (std::uint64_t n = 0; n <= 4; ++n) {
      const Federation a = obstruction_pred(s, n, t1, u);
      const Federation b = obstruction_pred(s, n, t2, u);
      CHECK_MESSAGE(a.subset_of(b), serialize(m));
      CHECK_MESSAGE(a.subset_of(pu), serialize(m));
      CHECK_MESSAGE(prev.subset_of(a), serialize(m));
      CHECK(a.subset_of(u));
      prev = a;
    }
  }
}

TEST_CASE("escape profiles partition the location") {
  std::mt19937_64 rng(17);
  for (int iter = 0; iter < 80; ++iter) {
    const Wta m = testing::random_model(rng);
    const StateSpace s(m, {});
    const Federation u = s.universe();
    const Federation comp = fed_subtract(u, random_target(rng, s));
    for (std::size_t l = 0; l < m.locations.size(); ++l) {
      const auto cells = escape_profiles(s, l, 1000, comp, u);
      Federation cover = s.empty();
      for (std::size_t a = 0; a < cells.size(); ++a) {
        std::uint64_t cost = 0;
        for (std::size_t e : cells[a].escaping_edges) cost += m.edges[e].weight;
        CHECK(cost == cells[a].escape_cost);
        CHECK(cells[a].location == l);
        for (std::size_t b = a + 1; b < cells.size(); ++b) {
          CHECK(cells[a].cell.intersect(cells[b].cell).is_empty());
        }
        cover.add(l, cells[a].cell);
      }
      Federation here = s.empty();
      for (const auto& d : u.at(l)) here.add(l, d);
      CHECK(cover.equals(here));
    }
  }
}
