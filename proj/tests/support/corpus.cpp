#include "corpus.hpp"

#include <algorithm>

namespace tol::testing {

namespace {

int uniform(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

bool chance(std::mt19937_64& rng, double p) { return std::bernoulli_distribution(p)(rng); }

CmpOp any_op(std::mt19937_64& rng) {
  static constexpr CmpOp ops[] = {CmpOp::lt, CmpOp::le, CmpOp::eq, CmpOp::ge, CmpOp::gt};
  return ops[uniform(rng, 0, 4)];
}

}  // namespace

Wta random_model(std::mt19937_64& rng, std::uint32_t min_weight) {
  Wta m;
  const int nclocks = uniform(rng, 0, 2);
  const char* names[] = {"x", "y"};
  for (int c = 0; c < nclocks; ++c) m.clocks.push_back(names[c]);
  const int nloc = uniform(rng, 1, 4);
  for (int l = 0; l < nloc; ++l) {
    Location loc;
    loc.id = "l" + std::to_string(l);
    for (int c = 0; c < nclocks; ++c) {
      if (!chance(rng, 0.35)) continue;
      if (chance(rng, 0.5)) {
        loc.invariant.push_back({static_cast<std::size_t>(c), CmpOp::lt, uniform(rng, 1, kMaxConst)});
      } else {
        loc.invariant.push_back({static_cast<std::size_t>(c), CmpOp::le, uniform(rng, 0, kMaxConst)});
      }
    }
    if (chance(rng, 0.5)) loc.labels.push_back("p");
    if (chance(rng, 0.5)) loc.labels.push_back("q");
    m.locations.push_back(std::move(loc));
  }
  m.initial = 0;
  const int nedges = uniform(rng, 0, 6);
  for (int k = 0; k < nedges; ++k) {
    Edge e;
    e.source = static_cast<std::size_t>(uniform(rng, 0, nloc - 1));
    e.target = static_cast<std::size_t>(uniform(rng, 0, nloc - 1));
    e.action = "a";
    for (int c = 0; c < nclocks; ++c) {
      if (chance(rng, 0.4)) e.guard.push_back({static_cast<std::size_t>(c), any_op(rng), uniform(rng, 0, kMaxConst)});
      if (chance(rng, 0.5)) e.resets.push_back(static_cast<std::size_t>(c));
    }
    e.weight = static_cast<std::uint32_t>(uniform(rng, static_cast<int>(min_weight), 3));
    m.edges.push_back(std::move(e));
  }
  m.validate();
  return m;
}

namespace {

struct FormulaGen {
  std::mt19937_64& rng;
  const Wta& m;
  FormulaShape shape;
  bool freeze_used = false;

  std::uint32_t grade() { return static_cast<std::uint32_t>(uniform(rng, 0, static_cast<int>(shape.max_grade))); }

  TolFormula leaf(bool j_bound) {
    std::vector<std::string> clocks = m.clocks;
    if (j_bound) clocks.push_back("j");
    const int pick = uniform(rng, 0, clocks.empty() ? 2 : 4);
    switch (pick) {
      case 0: return chance(rng, 0.5) ? TolFormula::atom("p") : TolFormula::atom("q");
      case 1: return chance(rng, 0.7) ? TolFormula::atom("p") : TolFormula::truth();
      case 2: return TolFormula::atom("q");
      default: {
        const auto& c = clocks[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(clocks.size()) - 1))];
        return TolFormula::clock_atom(c, any_op(rng), uniform(rng, 0, kMaxConst));
      }
    }
  }

  TolFormula gen(int depth, bool j_bound) {
    if (depth <= 0 || chance(rng, 0.2)) return leaf(j_bound);
    const int pick = uniform(rng, 0, 11);
    switch (pick) {
      case 0: return TolFormula::negate(gen(depth - 1, j_bound));
      case 1: return TolFormula::conj(gen(depth - 1, j_bound), gen(depth - 1, j_bound));
      case 2: return TolFormula::disj(gen(depth - 1, j_bound), gen(depth - 1, j_bound));
      case 3: return TolFormula::implies(gen(depth - 1, j_bound), gen(depth - 1, j_bound));
      case 4:
      case 5: return TolFormula::until(grade(), gen(depth - 1, j_bound), gen(depth - 1, j_bound));
      case 6:
      case 7: return TolFormula::release(grade(), gen(depth - 1, j_bound), gen(depth - 1, j_bound));
      case 8: return TolFormula::finally(grade(), gen(depth - 1, j_bound));
      case 9: return TolFormula::globally(grade(), gen(depth - 1, j_bound));
      case 10: return TolFormula::weak_until(grade(), gen(depth - 1, j_bound), gen(depth - 1, j_bound));
      default:
        if (!freeze_used && !j_bound) {
          freeze_used = true;
          return TolFormula::freeze("j", gen(depth - 1, true));
        }
        return TolFormula::negate(gen(depth - 1, j_bound));
    }
  }
};

struct AstGen {
  std::mt19937_64& rng;
  std::int32_t max_const;
  std::vector<std::string> scope;

  TolFormula gen(int depth) {
    if (depth <= 0 || chance(rng, 0.15)) {
      switch (uniform(rng, 0, 3)) {
        case 0: return TolFormula::truth();
        case 1: return TolFormula::atom(std::string(1, static_cast<char>('a' + uniform(rng, 0, 2))));
        case 2: return TolFormula::atom("sN");
        default: {
          static const char* clocks[] = {"x", "j", "k"};
          return TolFormula::clock_atom(clocks[uniform(rng, 0, 2)], any_op(rng), uniform(rng, 0, max_const));
        }
      }
    }
    const auto n = static_cast<std::uint32_t>(uniform(rng, 0, 9));
    switch (uniform(rng, 0, 5)) {
      case 0: return TolFormula::negate(gen(depth - 1));
      case 1: return TolFormula::conj(gen(depth - 1), gen(depth - 1));
      case 2: return TolFormula::until(n, gen(depth - 1), gen(depth - 1));
      case 3: return TolFormula::release(n, gen(depth - 1), gen(depth - 1));
      default: {
        static const char* binders[] = {"j", "k", "m"};
        std::vector<std::string> free;
        for (const char* b : binders) {
          if (std::find(scope.begin(), scope.end(), b) == scope.end()) free.push_back(b);
        }
        if (free.empty()) return TolFormula::negate(gen(depth - 1));
        const std::string b = free[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(free.size()) - 1))];
        scope.push_back(b);
        TolFormula body = gen(depth - 1);
        scope.pop_back();
        return TolFormula::freeze(b, std::move(body));
      }
    }
  }
};

}  // namespace

TolFormula random_formula(std::mt19937_64& rng, const Wta& m, const FormulaShape& shape) {
  FormulaGen g{rng, m, shape};
  return g.gen(shape.depth, false);
}

TolFormula random_ast(std::mt19937_64& rng, int depth, std::int32_t max_const) {
  AstGen g{rng, max_const, {}};
  return g.gen(depth);
}

ExplicitGraph corpus_graph(const Wta& m) {
  TolFormula body = TolFormula::clock_atom("j", CmpOp::le, kMaxConst);
  for (const auto& c : m.clocks) body = TolFormula::conj(body, TolFormula::clock_atom(c, CmpOp::le, kMaxConst));
  return discretize(m, TolFormula::freeze("j", body));
}

std::vector<CorpusEntry> build_corpus(std::uint64_t seed, std::size_t models,
                                      std::size_t formulas_per_model, const FormulaShape& shape,
                                      std::uint32_t min_weight) {
  std::mt19937_64 rng(seed);
  std::vector<CorpusEntry> out;
  for (std::size_t i = 0; i < models; ++i) {
    CorpusEntry e{random_model(rng, min_weight), {}, {}};
    e.graph = corpus_graph(e.model);
    for (std::size_t k = 0; k < formulas_per_model; ++k) e.formulas.push_back(random_formula(rng, e.model, shape));
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace tol::testing
