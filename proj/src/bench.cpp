#include "tol/bench.hpp"

#include <chrono>
#include <cmath>
#include <future>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "tol/checker.hpp"
#include "tol/error.hpp"

namespace tol {

namespace {

Wta chain_skeleton(std::uint32_t k) {
  if (k < 2) throw Error("benchmark size k must be at least 2");
  Wta m;
  m.clocks = {"x"};
  for (std::uint32_t i = 0; i < k; ++i) {
    Location loc;
    loc.id = "s" + std::to_string(i);
    loc.labels = {loc.id};
    m.locations.push_back(std::move(loc));
  }
  m.initial = 0;
  return m;
}

Edge timed_edge(std::size_t src, std::size_t dst, std::string action, std::int32_t lower,
                std::uint32_t weight) {
  Edge e;
  e.source = src;
  e.target = dst;
  e.action = std::move(action);
  e.guard = {ClockAtom{0, CmpOp::ge, lower}};
  e.resets = {0};
  e.weight = weight;
  return e;
}

std::string last(std::uint32_t k) { return "s" + std::to_string(k - 1); }

}  // namespace

BenchCase gen_pipeline(std::uint32_t k) {
  Wta m = chain_skeleton(k);
  const auto ik = static_cast<std::int32_t>(k);
  // The first hop waits 2k so that the k-2 remaining hops of length k put
  // the first arrival at s(k-1) at exactly k*k.
  for (std::uint32_t i = 0; i < k; ++i) {
    m.locations[i].invariant = {ClockAtom{0, CmpOp::le, i == 0 ? 2 * ik : ik}};
  }
  for (std::uint32_t i = 0; i + 1 < k; ++i) {
    m.edges.push_back(timed_edge(i, i + 1, "step", i == 0 ? 2 * ik : ik, 1));
  }
  m.edges.push_back(timed_edge(k - 1, k - 1, "stay", ik, 1));
  m.validate();
  const std::string text =
      "j. <#1> G (" + last(k) + " -> j >= " + std::to_string(k * k) + ")";
  return {std::move(m), parse_formula(text)};
}

BenchCase gen_mesh(std::uint32_t k) {
  Wta m = chain_skeleton(k);
  for (std::uint32_t i = 0; i < k; ++i) {
    for (std::uint32_t j = 0; j < k; ++j) {
      if (i == j) continue;
      m.edges.push_back(timed_edge(i, j, "move", 1, j + 1 == k ? 1 : 0));
    }
  }
  m.validate();
  const std::string text =
      "j. <#1> F (" + last(k) + " & j >= " + std::to_string(k * k) + ")";
  return {std::move(m), parse_formula(text)};
}

BenchCase gen_case(const std::string& name, std::uint32_t k) {
  if (name == "pipeline") return gen_pipeline(k);
  if (name == "mesh") return gen_mesh(k);
  throw Error("unknown benchmark case '" + name + "'");
}

namespace {

void mean_std(const std::vector<double>& xs, double& mean, double& sd) {
  mean = 0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double ss = 0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  sd = xs.size() > 1 ? std::sqrt(ss / static_cast<double>(xs.size() - 1)) : 0.0;
}

nlohmann::json stats_json(const std::string& name, std::uint32_t k, std::size_t run,
                          double ms, double kb, const Verdict& v) {
  nlohmann::json fx = nlohmann::json::array();
  for (const auto& f : v.stats.fixpoints) {
    fx.push_back({{"formula", f.formula}, {"iterations", f.iterations},
                  {"peak_zones", f.peak_zones}});
  }
  return {{"case", name},
          {"k", k},
          {"run", run},
          {"runtime_ms", ms},
          {"mem_kb", kb},
          {"verdict", v.satisfied},
          {"zones_created", v.stats.zones_created},
          {"peak_federation", v.stats.peak_federation},
          {"fixpoints", fx}};
}

BenchResult bench_row(const std::string& name, std::uint32_t k, const BenchOptions& opts,
                      std::vector<nlohmann::json>& log) {
  BenchResult r;
  r.case_name = name;
  r.k = k;
  try {
    const BenchCase bc = gen_case(name, k);
    std::vector<double> ms, kb;
    for (std::size_t run = 0; run < opts.runs; ++run) {
      memory::reset_peak();
      const std::int64_t base = memory::live_bytes();
      const auto t0 = std::chrono::steady_clock::now();
      const Verdict v = check(bc.model, bc.formula);
      const auto t1 = std::chrono::steady_clock::now();
      const double peak_kb = static_cast<double>(memory::peak_bytes() - base) / 1024.0;
      ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
      kb.push_back(peak_kb);
      if (run == 0) {
        r.verdict = v.satisfied;
      } else if (r.verdict != v.satisfied) {
        throw Error("verdict changed between runs");
      }
      if (opts.jsonl) log.push_back(stats_json(name, k, run, ms.back(), peak_kb, v));
    }
    mean_std(ms, r.runtime_ms_mean, r.runtime_ms_std);
    mean_std(kb, r.mem_kb_mean, r.mem_kb_std);
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  return r;
}

}  // namespace

std::vector<BenchResult> run_bench(const std::vector<std::string>& cases,
                                   const std::vector<std::uint32_t>& ks,
                                   const BenchOptions& opts) {
  if (opts.runs < 5) throw Error("benchmarks need at least 5 runs per row");
  std::vector<std::pair<std::string, std::uint32_t>> jobs;
  for (const auto& c : cases) {
    for (auto k : ks) jobs.emplace_back(c, k);
  }
  std::vector<BenchResult> rows(jobs.size());
  std::vector<std::vector<nlohmann::json>> logs(jobs.size());
  if (opts.parallel) {
    std::vector<std::future<BenchResult>> fs;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      fs.push_back(std::async(std::launch::async, [&, i] {
        return bench_row(jobs[i].first, jobs[i].second, opts, logs[i]);
      }));
    }
    for (std::size_t i = 0; i < jobs.size(); ++i) rows[i] = fs[i].get();
  } else {
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      rows[i] = bench_row(jobs[i].first, jobs[i].second, opts, logs[i]);
    }
  }
  if (opts.jsonl) {
    for (const auto& log : logs) {
      for (const auto& j : log) *opts.jsonl << j.dump() << '\n';
    }
  }
  return rows;
}

std::string bench_csv_header() {
  return "case,k,runtime_ms_mean,runtime_ms_std,mem_kb_mean,mem_kb_std,verdict";
}

std::string bench_csv(const std::vector<BenchResult>& rows) {
  std::ostringstream os;
  os << bench_csv_header() << '\n';
  os << std::fixed << std::setprecision(3);
  for (const auto& r : rows) {
    os << r.case_name << ',' << r.k << ',';
    if (!r.error.empty()) {
      os << "ERROR,ERROR,ERROR,ERROR,ERROR\n";
      continue;
    }
    os << r.runtime_ms_mean << ',' << r.runtime_ms_std << ',' << r.mem_kb_mean << ','
       << r.mem_kb_std << ',' << (r.verdict ? "SAT" : "UNSAT") << '\n';
  }
  return os.str();
}

}  // namespace tol
