#pragma once

// Difference bound matrices and federations (finite unions of zones).
//
// Index 0 of every matrix is the reference clock, fixed at value 0. Entry
// (i, j) bounds x_i - x_j. Every Dbm handed out by this header is canonical:
// either empty, or closed under the triangle inequality with (0, <=) on the
// diagonal.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <boost/container/small_vector.hpp>

namespace tol {

/// A bound `~ c` with `~` in {<, <=}, or +infinity.
///
/// Encoded as raw = 2c + (weak ? 1 : 0) so that the natural integer order is
/// the bound order: (c,<) < (c,<=) < (c+1,<).
class Bound {
 public:
  constexpr Bound() = default;

  static constexpr Bound infinity() { return from_raw(kInfRaw); }
  static constexpr Bound weak(std::int32_t c) { return from_raw(2 * c + 1); }
  static constexpr Bound strict(std::int32_t c) { return from_raw(2 * c); }
  static constexpr Bound le_zero() { return weak(0); }
  static constexpr Bound from_raw(std::int32_t raw) {
    Bound b;
    b.raw_ = raw;
    return b;
  }

  constexpr bool is_infinity() const { return raw_ == kInfRaw; }
  constexpr bool is_strict() const { return is_infinity() || (raw_ & 1) == 0; }
  constexpr bool is_weak() const { return !is_strict(); }
  /// Constant part; meaningless for infinity.
  constexpr std::int32_t value() const { return raw_ >> 1; }
  constexpr std::int32_t raw() const { return raw_; }

  constexpr auto operator<=>(const Bound&) const = default;

  /// (a,~1) + (b,~2) = (a+b, weak iff both weak); saturates at infinity.
  friend constexpr Bound operator+(Bound a, Bound b) {
    if (a.is_infinity() || b.is_infinity()) return infinity();
    return from_raw(a.raw_ + b.raw_ - ((a.raw_ | b.raw_) & 1));
  }

  /// Bound of the complementary constraint on the transposed pair:
  /// not (x - y ~ c)  <=>  y - x ~' -c. Undefined for infinity.
  constexpr Bound complement() const { return from_raw(1 - raw_); }

  std::string str() const;

 private:
  static constexpr std::int32_t kInfRaw = std::numeric_limits<std::int32_t>::max();
  std::int32_t raw_ = kInfRaw;
};

/// Elementary constraint x_i - x_j ~ bound.
struct DiffConstraint {
  std::size_t i = 0;
  std::size_t j = 0;
  Bound bound;
};

/// Comparison operators of the clock-constraint grammar.
enum class CmpOp { lt, le, eq, ge, gt };

std::string_view cmp_op_str(CmpOp op);

/// Expands `x_clock op c` into one or two difference constraints.
boost::container::small_vector<DiffConstraint, 2> atom_constraints(std::size_t clock, CmpOp op,
                                                                   std::int32_t c);

/// Exact satisfaction of `v op c` where v is a scaled value (v / denom).
bool compare_scaled(std::int64_t v, std::int64_t denom, CmpOp op, std::int64_t c);

enum class Relation { equal, subset, superset, incomparable };

class Dbm {
 public:
  /// Unconstrained non-negative clocks.
  static Dbm universe(std::size_t dim);
  /// All clocks equal to zero.
  static Dbm zero(std::size_t dim);
  static Dbm empty(std::size_t dim);
  /// Canonical intersection of the universe with the given constraints.
  static Dbm from_constraints(std::size_t dim, std::span<const DiffConstraint> cs);

  std::size_t dim() const noexcept { return dim_; }
  bool is_empty() const noexcept { return empty_; }
  Bound at(std::size_t i, std::size_t j) const { return m_[i * dim_ + j]; }

  Dbm conjoin(const DiffConstraint& c) const;
  Dbm conjoin(std::span<const DiffConstraint> cs) const;
  Dbm intersect(const Dbm& other) const;
  /// Delay successors: {v + t | v in d, t >= 0}.
  Dbm up() const;
  /// Delay predecessors: {v | exists t >= 0, v + t in d}, clipped to v >= 0.
  Dbm down() const;
  /// Image under setting every listed clock to 0.
  Dbm reset(std::span<const std::size_t> clocks) const;
  /// {v[clock <- t] | v in d, t >= 0}.
  Dbm free(std::size_t clock) const;
  /// Max-constant normalization; `ceiling[i]` is the constant for clock i
  /// (entry 0 ignored).
  Dbm extrapolate(std::span<const std::int32_t> ceiling) const;

  Relation relation(const Dbm& other) const;
  bool subset_of(const Dbm& other) const;
  /// Smallest zone containing both operands.
  Dbm convex_hull(const Dbm& other) const;

  /// Exact difference as a list of pairwise disjoint non-empty zones.
  std::vector<Dbm> subtract(const Dbm& other) const;

  /// Membership of the point whose clock i (1-based) has value
  /// values[i-1] / denom.
  bool contains(std::span<const std::int64_t> values, std::int64_t denom) const;

  /// True when the triangle inequality holds for every index triple.
  bool satisfies_triangle_inequality() const;

  bool operator==(const Dbm& other) const;

  /// Clock-pair constraints that differ from the universe, in (i, j) order.
  /// `names[i]` names clock i; names[0] is unused.
  std::string constraint_list(std::span<const std::string> names) const;

 private:
  explicit Dbm(std::size_t dim);
  Bound& ref(std::size_t i, std::size_t j) { return m_[i * dim_ + j]; }
  void close();
  void tighten(std::size_t i, std::size_t j, Bound b);
  void check_same_dim(const Dbm& other) const;

  std::size_t dim_ = 1;
  bool empty_ = false;
  boost::container::small_vector<Bound, 25> m_;
};

/// Full-matrix closure by Floyd-Warshall. Exposed for tests on hand-built
/// matrices; every Dbm produced by the class is already canonical.
Dbm canonicalize(std::size_t dim, std::span<const Bound> raw_matrix);

/// A symbolic state (location, zone).
struct Zone {
  std::size_t location = 0;
  Dbm dbm = Dbm::universe(1);
};

/// Finite union of zones, stored per location.
class Federation {
 public:
  Federation() = default;
  Federation(std::size_t locations, std::size_t dim);

  std::size_t locations() const noexcept { return by_loc_.size(); }
  std::size_t dim() const noexcept { return dim_; }

  /// Adds a zone; empty zones are dropped.
  void add(std::size_t location, Dbm d);
  void add(const Federation& other);

  const std::vector<Dbm>& at(std::size_t location) const { return by_loc_[location]; }
  std::vector<Zone> zones() const;
  /// Total zone count over all locations.
  std::size_t size() const;
  bool is_empty() const;

  Federation unite(const Federation& other) const;
  Federation intersect(const Federation& other) const;
  /// Per-location intersection with a single zone.
  Federation intersect(std::size_t location, const Dbm& d) const;

  bool subset_of(const Federation& other) const;
  bool equals(const Federation& other) const;
  Relation relation(const Federation& other) const;
  bool contains(std::size_t location, std::span<const std::int64_t> values,
                std::int64_t denom) const;

  /// Drops zones included in another zone of the same location and merges
  /// pairs whose convex hull equals their union.
  void reduce();

  Federation extrapolate(std::span<const std::int32_t> ceiling) const;

 private:
  void check_same_shape(const Federation& other) const;

  std::size_t dim_ = 1;
  std::vector<std::vector<Dbm>> by_loc_;
};

/// Exact set difference f \ g.
Federation fed_subtract(const Federation& f, const Federation& g);

/// Difference of a zone list and a zone list at one location.
std::vector<Dbm> subtract_all(std::vector<Dbm> from, const std::vector<Dbm>& what);

}  // namespace tol
