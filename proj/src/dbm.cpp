#include "tol/dbm.hpp"

#include <algorithm>
#include <sstream>

#include "tol/error.hpp"

namespace tol {

std::string Bound::str() const {
  if (is_infinity()) return "<inf";
  return (is_strict() ? "<" : "<=") + std::to_string(value());
}

std::string_view cmp_op_str(CmpOp op) {
  switch (op) {
    case CmpOp::lt: return "<";
    case CmpOp::le: return "<=";
    case CmpOp::eq: return "=";
    case CmpOp::ge: return ">=";
    case CmpOp::gt: return ">";
  }
  return "?";
}

boost::container::small_vector<DiffConstraint, 2> atom_constraints(std::size_t clock, CmpOp op,
                                                                   std::int32_t c) {
  boost::container::small_vector<DiffConstraint, 2> out;
  switch (op) {
    case CmpOp::lt: out.push_back({clock, 0, Bound::strict(c)}); break;
    case CmpOp::le: out.push_back({clock, 0, Bound::weak(c)}); break;
    case CmpOp::eq:
      out.push_back({clock, 0, Bound::weak(c)});
      out.push_back({0, clock, Bound::weak(-c)});
      break;
    case CmpOp::ge: out.push_back({0, clock, Bound::weak(-c)}); break;
    case CmpOp::gt: out.push_back({0, clock, Bound::strict(-c)}); break;
  }
  return out;
}

bool compare_scaled(std::int64_t v, std::int64_t denom, CmpOp op, std::int64_t c) {
  const std::int64_t rhs = c * denom;
  switch (op) {
    case CmpOp::lt: return v < rhs;
    case CmpOp::le: return v <= rhs;
    case CmpOp::eq: return v == rhs;
    case CmpOp::ge: return v >= rhs;
    case CmpOp::gt: return v > rhs;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Dbm

Dbm::Dbm(std::size_t dim) : dim_(dim), m_(dim * dim, Bound::infinity()) {
  if (dim == 0) throw ArityError("dbm dimension must include the reference clock");
}

Dbm Dbm::universe(std::size_t dim) {
  Dbm d(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    d.ref(i, i) = Bound::le_zero();
    d.ref(0, i) = Bound::le_zero();
  }
  return d;
}

Dbm Dbm::zero(std::size_t dim) {
  Dbm d(dim);
  std::fill(d.m_.begin(), d.m_.end(), Bound::le_zero());
  return d;
}

Dbm Dbm::empty(std::size_t dim) {
  Dbm d = universe(dim);
  d.empty_ = true;
  return d;
}

Dbm Dbm::from_constraints(std::size_t dim, std::span<const DiffConstraint> cs) {
  return universe(dim).conjoin(cs);
}

void Dbm::check_same_dim(const Dbm& other) const {
  if (other.dim_ != dim_) {
    throw ArityError("dbm dimension mismatch: " + std::to_string(dim_) + " vs " +
                     std::to_string(other.dim_));
  }
}

void Dbm::close() {
  const std::size_t n = dim_;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      const Bound ik = at(i, k);
      if (ik.is_infinity()) continue;
      for (std::size_t j = 0; j < n; ++j) {
        const Bound via = ik + at(k, j);
        if (via < at(i, j)) ref(i, j) = via;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (at(i, i) < Bound::le_zero()) {
        empty_ = true;
        return;
      }
    }
  }
}

void Dbm::tighten(std::size_t i, std::size_t j, Bound b) {
  if (empty_ || !(b < at(i, j))) return;
  if (at(j, i) + b < Bound::le_zero()) {
    empty_ = true;
    return;
  }
  ref(i, j) = b;
  const std::size_t n = dim_;
  for (std::size_t k = 0; k < n; ++k) {
    const Bound ki = at(k, i);
    if (ki.is_infinity()) continue;
    const Bound kij = ki + b;
    for (std::size_t l = 0; l < n; ++l) {
      const Bound via = kij + at(j, l);
      if (via < at(k, l)) ref(k, l) = via;
    }
  }
}

Dbm Dbm::conjoin(const DiffConstraint& c) const {
  if (c.i >= dim_ || c.j >= dim_) {
    throw ArityError("constraint on clock index " + std::to_string(std::max(c.i, c.j)) +
                     " outside dimension " + std::to_string(dim_));
  }
  Dbm out = *this;
  out.tighten(c.i, c.j, c.bound);
  return out;
}

Dbm Dbm::conjoin(std::span<const DiffConstraint> cs) const {
  Dbm out = *this;
  for (const auto& c : cs) {
    if (c.i >= dim_ || c.j >= dim_) {
      throw ArityError("constraint on clock index " + std::to_string(std::max(c.i, c.j)) +
                       " outside dimension " + std::to_string(dim_));
    }
    out.tighten(c.i, c.j, c.bound);
    if (out.empty_) break;
  }
  return out;
}

Dbm Dbm::intersect(const Dbm& other) const {
  check_same_dim(other);
  if (empty_) return *this;
  if (other.empty_) return other;
  Dbm out = *this;
  for (std::size_t i = 0; i < dim_ && !out.empty_; ++i) {
    for (std::size_t j = 0; j < dim_ && !out.empty_; ++j) {
      if (i != j) out.tighten(i, j, other.at(i, j));
    }
  }
  return out;
}

Dbm Dbm::up() const {
  Dbm out = *this;
  if (empty_) return out;
  for (std::size_t i = 1; i < dim_; ++i) out.ref(i, 0) = Bound::infinity();
  return out;
}

Dbm Dbm::down() const {
  Dbm out = *this;
  if (empty_) return out;
  for (std::size_t i = 1; i < dim_; ++i) {
    Bound lower = Bound::le_zero();
    for (std::size_t j = 1; j < dim_; ++j) {
      if (out.at(j, i) < lower) lower = out.at(j, i);
    }
    out.ref(0, i) = lower;
  }
  return out;
}

Dbm Dbm::reset(std::span<const std::size_t> clocks) const {
  Dbm out = *this;
  if (empty_) return out;
  for (std::size_t x : clocks) {
    if (x == 0 || x >= dim_) throw ArityError("reset of clock index " + std::to_string(x));
    for (std::size_t j = 0; j < dim_; ++j) {
      out.ref(x, j) = out.at(0, j);
      out.ref(j, x) = out.at(j, 0);
    }
    out.ref(x, x) = Bound::le_zero();
  }
  return out;
}

Dbm Dbm::free(std::size_t x) const {
  if (x == 0 || x >= dim_) throw ArityError("free of clock index " + std::to_string(x));
  Dbm out = *this;
  if (empty_) return out;
  for (std::size_t j = 0; j < dim_; ++j) {
    if (j == x) continue;
    out.ref(x, j) = Bound::infinity();
    out.ref(j, x) = out.at(j, 0);
  }
  out.ref(0, x) = Bound::le_zero();
  return out;
}

Dbm Dbm::extrapolate(std::span<const std::int32_t> ceiling) const {
  if (ceiling.size() < dim_) throw ArityError("extrapolation ceiling does not cover every clock");
  Dbm out = *this;
  if (empty_) return out;
  bool changed = false;
  for (std::size_t i = 0; i < dim_; ++i) {
    const std::int32_t ki = i == 0 ? 0 : ceiling[i];
    for (std::size_t j = 0; j < dim_; ++j) {
      if (i == j) continue;
      const Bound b = out.at(i, j);
      if (b.is_infinity()) continue;
      const std::int32_t kj = j == 0 ? 0 : ceiling[j];
      if (b > Bound::weak(ki)) {
        out.ref(i, j) = Bound::infinity();
        changed = true;
      } else if (b < Bound::strict(-kj)) {
        out.ref(i, j) = Bound::strict(-kj);
        changed = true;
      }
    }
  }
  if (changed) out.close();
  return out;
}

Relation Dbm::relation(const Dbm& other) const {
  check_same_dim(other);
  if (empty_ && other.empty_) return Relation::equal;
  if (empty_) return Relation::subset;
  if (other.empty_) return Relation::superset;
  bool sub = true;
  bool sup = true;
  for (std::size_t k = 0; k < m_.size() && (sub || sup); ++k) {
    if (m_[k] > other.m_[k]) sub = false;
    if (m_[k] < other.m_[k]) sup = false;
  }
  if (sub && sup) return Relation::equal;
  if (sub) return Relation::subset;
  if (sup) return Relation::superset;
  return Relation::incomparable;
}

bool Dbm::subset_of(const Dbm& other) const {
  check_same_dim(other);
  if (empty_) return true;
  if (other.empty_) return false;
  for (std::size_t k = 0; k < m_.size(); ++k) {
    if (m_[k] > other.m_[k]) return false;
  }
  return true;
}

Dbm Dbm::convex_hull(const Dbm& other) const {
  check_same_dim(other);
  if (empty_) return other;
  if (other.empty_) return *this;
  Dbm out = *this;
  for (std::size_t k = 0; k < m_.size(); ++k) out.m_[k] = std::max(m_[k], other.m_[k]);
  return out;
}

std::vector<Dbm> Dbm::subtract(const Dbm& other) const {
  check_same_dim(other);
  if (empty_) return {};
  if (other.empty_) return {*this};
  if (subset_of(other)) return {};
  if (intersect(other).is_empty()) return {*this};
  std::vector<Dbm> pieces;
  Dbm rem = *this;
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) {
      if (i == j) continue;
      const Bound b = other.at(i, j);
      if (!(b < rem.at(i, j))) continue;
      Dbm piece = rem;
      piece.tighten(j, i, b.complement());
      if (!piece.empty_) pieces.push_back(std::move(piece));
      rem.tighten(i, j, b);
    }
  }
  return pieces;
}

bool Dbm::contains(std::span<const std::int64_t> values, std::int64_t denom) const {
  if (empty_) return false;
  if (values.size() + 1 != dim_) throw ArityError("point arity does not match dbm dimension");
  auto value = [&](std::size_t i) -> std::int64_t { return i == 0 ? 0 : values[i - 1]; };
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) {
      if (i == j) continue;
      const Bound b = at(i, j);
      if (b.is_infinity()) continue;
      const std::int64_t diff = value(i) - value(j);
      const std::int64_t c = static_cast<std::int64_t>(b.value()) * denom;
      if (b.is_strict() ? !(diff < c) : !(diff <= c)) return false;
    }
  }
  return true;
}

bool Dbm::satisfies_triangle_inequality() const {
  if (empty_) return true;
  for (std::size_t i = 0; i < dim_; ++i) {
    if (at(i, i) != Bound::le_zero()) return false;
    for (std::size_t j = 0; j < dim_; ++j) {
      for (std::size_t k = 0; k < dim_; ++k) {
        if (at(i, j) > at(i, k) + at(k, j)) return false;
      }
    }
  }
  return true;
}

bool Dbm::operator==(const Dbm& other) const {
  if (dim_ != other.dim_) return false;
  if (empty_ || other.empty_) return empty_ == other.empty_;
  return std::equal(m_.begin(), m_.end(), other.m_.begin());
}

std::string Dbm::constraint_list(std::span<const std::string> names) const {
  if (empty_) return "false";
  std::vector<std::string> parts;
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) {
      if (i == j) continue;
      const Bound b = at(i, j);
      if (i == 0 && b == Bound::le_zero()) continue;
      if (b.is_infinity()) continue;
      std::ostringstream os;
      const char* op = b.is_strict() ? "<" : "<=";
      if (j == 0) {
        os << names[i] << op << b.value();
      } else if (i == 0) {
        os << names[j] << (b.is_strict() ? ">" : ">=") << -b.value();
      } else {
        os << names[i] << "-" << names[j] << op << b.value();
      }
      parts.push_back(os.str());
    }
  }
  if (parts.empty()) return "true";
  std::string out;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (k) out += ", ";
    out += parts[k];
  }
  return out;
}

Dbm canonicalize(std::size_t dim, std::span<const Bound> raw_matrix) {
  if (raw_matrix.size() != dim * dim) throw ArityError("matrix size does not match dimension");
  Dbm d = Dbm::universe(dim);
  std::vector<DiffConstraint> cs;
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      if (i == j) {
        if (raw_matrix[i * dim + j] < Bound::le_zero()) return Dbm::empty(dim);
        continue;
      }
      cs.push_back({i, j, raw_matrix[i * dim + j]});
    }
  }
  return d.conjoin(cs);
}

// ---------------------------------------------------------------------------
// Federation

Federation::Federation(std::size_t locations, std::size_t dim) : dim_(dim), by_loc_(locations) {}

void Federation::check_same_shape(const Federation& other) const {
  if (other.dim_ != dim_ || other.by_loc_.size() != by_loc_.size()) {
    throw ArityError("federation shape mismatch");
  }
}

void Federation::add(std::size_t location, Dbm d) {
  if (d.dim() != dim_) throw ArityError("zone dimension does not match federation");
  if (d.is_empty()) return;
  by_loc_.at(location).push_back(std::move(d));
}

void Federation::add(const Federation& other) {
  check_same_shape(other);
  for (std::size_t l = 0; l < by_loc_.size(); ++l) {
    for (const auto& d : other.by_loc_[l]) by_loc_[l].push_back(d);
  }
}

std::vector<Zone> Federation::zones() const {
  std::vector<Zone> out;
  for (std::size_t l = 0; l < by_loc_.size(); ++l) {
    for (const auto& d : by_loc_[l]) out.push_back({l, d});
  }
  return out;
}

std::size_t Federation::size() const {
  std::size_t n = 0;
  for (const auto& v : by_loc_) n += v.size();
  return n;
}

bool Federation::is_empty() const { return size() == 0; }

Federation Federation::unite(const Federation& other) const {
  Federation out = *this;
  out.add(other);
  out.reduce();
  return out;
}

Federation Federation::intersect(const Federation& other) const {
  check_same_shape(other);
  Federation out(by_loc_.size(), dim_);
  for (std::size_t l = 0; l < by_loc_.size(); ++l) {
    for (const auto& a : by_loc_[l]) {
      for (const auto& b : other.by_loc_[l]) out.add(l, a.intersect(b));
    }
  }
  out.reduce();
  return out;
}

Federation Federation::intersect(std::size_t location, const Dbm& d) const {
  Federation out(by_loc_.size(), dim_);
  for (const auto& a : by_loc_.at(location)) out.add(location, a.intersect(d));
  return out;
}

bool Federation::subset_of(const Federation& other) const {
  check_same_shape(other);
  for (std::size_t l = 0; l < by_loc_.size(); ++l) {
    const auto& theirs = other.by_loc_[l];
    for (const auto& z : by_loc_[l]) {
      if (std::any_of(theirs.begin(), theirs.end(), [&](const Dbm& t) { return z.subset_of(t); }))
        continue;
      if (!subtract_all({z}, theirs).empty()) return false;
    }
  }
  return true;
}

bool Federation::equals(const Federation& other) const {
  return subset_of(other) && other.subset_of(*this);
}

Relation Federation::relation(const Federation& other) const {
  const bool sub = subset_of(other);
  const bool sup = other.subset_of(*this);
  if (sub && sup) return Relation::equal;
  if (sub) return Relation::subset;
  if (sup) return Relation::superset;
  return Relation::incomparable;
}

bool Federation::contains(std::size_t location, std::span<const std::int64_t> values,
                          std::int64_t denom) const {
  const auto& zs = by_loc_.at(location);
  return std::any_of(zs.begin(), zs.end(), [&](const Dbm& d) { return d.contains(values, denom); });
}

namespace {

void drop_included(std::vector<Dbm>& zs) {
  std::vector<bool> dead(zs.size(), false);
  for (std::size_t a = 0; a < zs.size(); ++a) {
    if (dead[a]) continue;
    for (std::size_t b = 0; b < zs.size(); ++b) {
      if (a == b || dead[b]) continue;
      if (zs[b].subset_of(zs[a])) dead[b] = true;
    }
  }
  std::size_t w = 0;
  for (std::size_t k = 0; k < zs.size(); ++k) {
    if (!dead[k]) {
      if (w != k) zs[w] = std::move(zs[k]);
      ++w;
    }
  }
  zs.erase(zs.begin() + static_cast<std::ptrdiff_t>(w), zs.end());
}

// Hull merging is quadratic in zone count per pass; beyond this size only
// inclusion reduction is done.
constexpr std::size_t kMergeLimit = 48;

bool merge_once(std::vector<Dbm>& zs) {
  for (std::size_t a = 0; a < zs.size(); ++a) {
    for (std::size_t b = a + 1; b < zs.size(); ++b) {
      Dbm hull = zs[a].convex_hull(zs[b]);
      if (subtract_all(subtract_all({hull}, {zs[a]}), {zs[b]}).empty()) {
        zs[a] = std::move(hull);
        zs.erase(zs.begin() + static_cast<std::ptrdiff_t>(b));
        return true;
      }
    }
  }
  return false;
}

}  // namespace

void Federation::reduce() {
  for (auto& zs : by_loc_) {
    std::erase_if(zs, [](const Dbm& d) { return d.is_empty(); });
    if (zs.size() < 2) continue;
    drop_included(zs);
    if (zs.size() <= kMergeLimit) {
      while (zs.size() > 1 && merge_once(zs)) drop_included(zs);
    }
  }
}

Federation Federation::extrapolate(std::span<const std::int32_t> ceiling) const {
  Federation out(by_loc_.size(), dim_);
  for (std::size_t l = 0; l < by_loc_.size(); ++l) {
    for (const auto& d : by_loc_[l]) out.add(l, d.extrapolate(ceiling));
  }
  out.reduce();
  return out;
}

std::vector<Dbm> subtract_all(std::vector<Dbm> from, const std::vector<Dbm>& what) {
  for (const auto& w : what) {
    if (from.empty()) break;
    std::vector<Dbm> next;
    for (const auto& z : from) {
      auto pieces = z.subtract(w);
      for (auto& p : pieces) next.push_back(std::move(p));
    }
    from = std::move(next);
  }
  return from;
}

Federation fed_subtract(const Federation& f, const Federation& g) {
  if (f.dim() != g.dim() || f.locations() != g.locations()) {
    throw ArityError("federation shape mismatch");
  }
  Federation out(f.locations(), f.dim());
  for (std::size_t l = 0; l < f.locations(); ++l) {
    for (auto& d : subtract_all(f.at(l), g.at(l))) out.add(l, std::move(d));
  }
  out.reduce();
  return out;
}

}  // namespace tol
