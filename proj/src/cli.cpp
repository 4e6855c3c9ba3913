#include "tol/cli.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "tol/bench.hpp"
#include "tol/checker.hpp"
#include "tol/error.hpp"
#include "tol/logic.hpp"
#include "tol/model.hpp"
#include "tol/oracle.hpp"

namespace tol {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "': file not found or unreadable");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

std::string trim_trailing_newlines(std::string s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
  return s;
}

struct FormulaArgs {
  std::string inline_text;
  std::string file;

  TolFormula load() const {
    if (!inline_text.empty() && !file.empty()) throw CLI::ValidationError("use only one of -f and -F");
    if (inline_text.empty() && file.empty()) throw CLI::RequiredError("-f or -F");
    return parse_formula(file.empty() ? inline_text : trim_trailing_newlines(read_file(file)));
  }
};

void add_formula_options(CLI::App* sub, FormulaArgs& fa) {
  sub->add_option("-f,--formula", fa.inline_text, "Formula text");
  sub->add_option("-F,--formula-file", fa.file, "File holding one formula");
}

void print_stats(std::ostream& out, const Stats& s) {
  out << "zones_created " << s.zones_created << '\n';
  out << "peak_federation " << s.peak_federation << '\n';
  out << "iteration_bound " << s.iteration_bound << '\n';
  out << "wall_ms " << s.wall_ms << '\n';
  for (const auto& f : s.fixpoints) {
    out << "fixpoint " << f.formula << " iterations " << f.iterations << " peak_zones "
        << f.peak_zones << '\n';
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Model checker for timed obstruction logic over weighted timed automata",
               "tolcheck"};
  app.require_subcommand(1);

  std::string model_path;
  FormulaArgs fa;

  auto* check_cmd = app.add_subcommand("check", "Decide a formula symbolically");
  check_cmd->add_option("model", model_path, "Model file")->required();
  add_formula_options(check_cmd, fa);
  std::string dump_path;
  bool show_stats = false;
  bool no_extrapolate = false;
  check_cmd->add_option("--dump-sat", dump_path, "Write the satisfaction set dump here");
  check_cmd->add_flag("--stats", show_stats, "Print fixpoint statistics");
  check_cmd->add_flag("--no-extrapolate", no_extrapolate, "Disable zone extrapolation");

  std::size_t cap = OracleOptions{}.state_cap;
  auto* oracle_cmd = app.add_subcommand("oracle", "Decide a formula by explicit enumeration");
  oracle_cmd->add_option("model", model_path, "Model file")->required();
  add_formula_options(oracle_cmd, fa);
  oracle_cmd->add_option("--cap", cap, "Explicit state cap");

  auto* diff_cmd = app.add_subcommand("diff", "Compare the symbolic checker with the oracle");
  diff_cmd->add_option("model", model_path, "Model file")->required();
  add_formula_options(diff_cmd, fa);
  diff_cmd->add_option("--cap", cap, "Explicit state cap");

  std::string translate_text;
  auto* translate_cmd = app.add_subcommand("translate", "Print the TCTL image of a grade-0 formula");
  translate_cmd->add_option("formula", translate_text, "Formula text")->required();

  std::string gen_case_name;
  std::uint32_t gen_k = 0;
  std::string gen_prefix;
  auto* gen_cmd = app.add_subcommand("gen", "Write a benchmark model and formula");
  gen_cmd->add_option("case", gen_case_name, "pipeline or mesh")
      ->required()
      ->check(CLI::IsMember({"pipeline", "mesh"}));
  gen_cmd->add_option("--k", gen_k, "Size parameter")->required()->check(CLI::Range(2u, 100000u));
  gen_cmd->add_option("-o,--output", gen_prefix, "Path prefix for <prefix>.wta and <prefix>.tol");

  std::vector<std::string> bench_cases;
  std::vector<std::uint32_t> bench_ks;
  std::size_t bench_runs = 5;
  std::string csv_path;
  std::string jsonl_path;
  bool parallel = false;
  auto* bench_cmd = app.add_subcommand("bench", "Time the checker on benchmark families");
  bench_cmd->add_option("case", bench_cases, "pipeline and/or mesh")
      ->required()
      ->check(CLI::IsMember({"pipeline", "mesh"}));
  bench_cmd->add_option("--k", bench_ks, "Comma-separated sizes")->required()->delimiter(',');
  bench_cmd->add_option("--runs", bench_runs, "Runs per row (at least 5)")
      ->check(CLI::Range(std::size_t{5}, std::size_t{1000000}));
  bench_cmd->add_option("--csv", csv_path, "CSV output path (stdout if omitted)");
  bench_cmd->add_option("--jsonl", jsonl_path, "Per-run statistics as JSON lines");
  bench_cmd->add_flag("--parallel", parallel, "Run rows concurrently");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(std::move(rev));
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kSat;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (check_cmd->parsed()) {
      const Wta m = parse_model(read_file(model_path));
      const TolFormula f = fa.load();
      CheckOptions opts;
      opts.extrapolate = !no_extrapolate;
      Checker ch(m, f, opts);
      const Verdict v = ch.run();
      out << (v.satisfied ? "SAT" : "UNSAT") << '\n';
      if (show_stats) print_stats(out, v.stats);
      if (!dump_path.empty()) write_file(dump_path, dump_sat(ch.space(), v.sat_sets.at(f)));
      return v.satisfied ? kSat : kUnsat;
    }
    if (oracle_cmd->parsed()) {
      const Wta m = parse_model(read_file(model_path));
      const bool sat = oracle_check(m, fa.load(), OracleOptions{cap});
      out << (sat ? "SAT" : "UNSAT") << '\n';
      return sat ? kSat : kUnsat;
    }
    if (diff_cmd->parsed()) {
      const Wta m = parse_model(read_file(model_path));
      const DiffReport r = differential(m, fa.load(), {}, OracleOptions{cap});
      out << r.str();
      return r.agree ? kSat : kUnsat;
    }
    if (translate_cmd->parsed()) {
      out << to_tctl(parse_formula(translate_text)).str() << '\n';
      return kSat;
    }
    if (gen_cmd->parsed()) {
      const BenchCase bc = gen_case(gen_case_name, gen_k);
      const std::string prefix =
          gen_prefix.empty() ? gen_case_name + std::to_string(gen_k) : gen_prefix;
      write_file(prefix + ".wta", serialize(bc.model));
      write_file(prefix + ".tol", bc.formula.str() + "\n");
      out << prefix << ".wta\n" << prefix << ".tol\n";
      return kSat;
    }
    if (bench_cmd->parsed()) {
      BenchOptions opts;
      opts.runs = bench_runs;
      opts.parallel = parallel;
      std::ofstream jsonl;
      if (!jsonl_path.empty()) {
        jsonl.open(jsonl_path);
        if (!jsonl) throw Error("cannot write '" + jsonl_path + "'");
        opts.jsonl = &jsonl;
      }
      const std::string csv = bench_csv(run_bench(bench_cases, bench_ks, opts));
      if (csv_path.empty()) {
        out << csv;
      } else {
        write_file(csv_path, csv);
      }
      return kSat;
    }
  } catch (const OracleScaleError& e) {
    err << "error: " << e.what() << '\n';
    return kOracleScale;
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << '\n' << app.help();
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace tol
