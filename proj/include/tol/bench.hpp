#pragma once

// Benchmark model families and measurement.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "tol/logic.hpp"
#include "tol/model.hpp"

namespace tol {

struct BenchCase {
  Wta model;
  TolFormula formula;
};

/// Chain s0 -> ... -> s(k-1) plus a self-loop on s(k-1), timed so that
/// s(k-1) is first entered exactly at time k*k.
BenchCase gen_pipeline(std::uint32_t k);
/// Complete digraph on k locations; only edges into s(k-1) cost anything.
BenchCase gen_mesh(std::uint32_t k);
/// Dispatches on "pipeline" or "mesh".
BenchCase gen_case(const std::string& name, std::uint32_t k);

struct BenchResult {
  std::string case_name;
  std::uint32_t k = 0;
  double runtime_ms_mean = 0;
  double runtime_ms_std = 0;
  double mem_kb_mean = 0;
  double mem_kb_std = 0;
  bool verdict = false;
  /// Non-empty if the row failed; the numeric fields are then meaningless.
  std::string error;
};

struct BenchOptions {
  std::size_t runs = 5;
  /// Run rows on separate threads. Allocation counters are per thread, so
  /// memory figures stay per row.
  bool parallel = false;
  /// If set, one JSON object per run with the checker stats.
  std::ostream* jsonl = nullptr;
};

std::vector<BenchResult> run_bench(const std::vector<std::string>& cases,
                                   const std::vector<std::uint32_t>& ks,
                                   const BenchOptions& opts = {});

std::string bench_csv_header();
std::string bench_csv(const std::vector<BenchResult>& rows);

namespace memory {
/// Bytes currently allocated through operator new on this thread.
std::int64_t live_bytes();
/// High-water mark of live_bytes() since the last reset_peak().
std::int64_t peak_bytes();
void reset_peak();
}  // namespace memory

}  // namespace tol
