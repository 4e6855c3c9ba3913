#pragma once

// Seeded random models and formulas for the property and differential suites.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "tol/logic.hpp"
#include "tol/model.hpp"
#include "tol/oracle.hpp"

namespace tol::testing {

/// At most 4 locations, 2 clocks, 6 edges; every constant at most kMaxConst.
inline constexpr std::int32_t kMaxConst = 3;

/// Edge weights are drawn from [min_weight, 3].
Wta random_model(std::mt19937_64& rng, std::uint32_t min_weight = 0);

struct FormulaShape {
  /// Highest grade drawn; 0 gives the TCTL fragment.
  std::uint32_t max_grade = 0;
  int depth = 3;
};

/// Random formula over labels p, q, the model's clocks, and at most one
/// formula clock named j.
TolFormula random_formula(std::mt19937_64& rng, const Wta& m, const FormulaShape& shape);

/// Random AST over propositions, clock atoms and every connective, with
/// arbitrary (distinct-per-branch) freeze binders. Used for parser tests.
TolFormula random_ast(std::mt19937_64& rng, int depth, std::int32_t max_const);

/// One explicit graph per model, built with the formula clock j and every
/// cap raised to kMaxConst, so any random formula can be evaluated on it.
ExplicitGraph corpus_graph(const Wta& m);

struct CorpusEntry {
  Wta model;
  ExplicitGraph graph;
  std::vector<TolFormula> formulas;
};

std::vector<CorpusEntry> build_corpus(std::uint64_t seed, std::size_t models,
                                      std::size_t formulas_per_model, const FormulaShape& shape,
                                      std::uint32_t min_weight = 0);

}  // namespace tol::testing
