#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "tol/cli.hpp"

using namespace tol;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string model(const char* name) { return (std::filesystem::path(TOL_MODELS) / name).string(); }

std::filesystem::path scratch(const char* name) {
  auto dir = std::filesystem::temp_directory_path() / "tolcheck_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* const kPhi1 = "j. <#3> G (!r_s | (r_s -> <#3> F (j <= 3 & a)))";

}  // namespace

TEST_CASE("check prints the verdict and sets the exit code") {
  const Run sat = run({"check", model("pipeline4.wta"), "-f", "j. <#1> G (s3 -> j >= 16)"});
  CHECK(sat.code == kSat);
  CHECK(sat.out == "SAT\n");
  const Run unsat = run({"check", model("pipeline4.wta"), "-f", "j. <#1> G (s3 -> j >= 17)"});
  CHECK(unsat.code == kUnsat);
  CHECK(unsat.out == "UNSAT\n");
  const Run plain = run({"check", model("pipeline4.wta"), "--no-extrapolate", "-f", "j. <#1> G (s3 -> j >= 16)"});
  CHECK(plain.code == kSat);
}

TEST_CASE("formula file and dumps") {
  const auto f = scratch("phi1.tol");
  std::ofstream(f) << kPhi1 << "\n";
  const auto dump = scratch("phi1.sat");
  const Run r = run({"check", model("case_study.wta"), "-F", f.string(), "--dump-sat", dump.string(), "--stats"});
  CHECK(r.code == kSat);
  CHECK(r.out.rfind("SAT\n", 0) == 0);
  CHECK(r.out.find("iteration_bound") != std::string::npos);
  CHECK(r.out.find("fixpoint ") != std::string::npos);
  const std::string text = slurp(dump);
  CHECK(text.find("s0 | ") != std::string::npos);
}

TEST_CASE("usage errors") {
  CHECK(run({"translate", "<#1> (p U q)"}).code == kUsage);
  const Run missing = run({"check", "/nonexistent/model.wta", "-f", "p"});
  CHECK(missing.code == kUsage);
  CHECK(missing.err.rfind("error: ", 0) == 0);
  CHECK(run({"frobnicate"}).code == kUsage);
  CHECK(run({"check", model("pipeline4.wta"), "-f", "p &"}).code == kUsage);
  CHECK(run({"check", model("pipeline4.wta"), "-f", "y <= 1"}).code == kUsage);
  CHECK(run({"gen", "pipeline", "--k", "1"}).code == kUsage);
  CHECK(run({"bench", "pipeline", "--k", "4", "--runs", "2"}).code == kUsage);
  CHECK(run({"--help"}).code == kSat);
}

TEST_CASE("model diagnostics reach stderr") {
  const auto bad = scratch("bad.wta");
  std::ofstream(bad) << "wta\nclocks x\nlocation l0 init\nedge l0 -> l0 action a guard z <= 2 weight 1\n";
  const Run r = run({"check", bad.string(), "-f", "p"});
  CHECK(r.code == kUsage);
  CHECK(r.err.find("E02") != std::string::npos);
}

TEST_CASE("translate") {
  const Run r = run({"translate", "<#0> (p U q)"});
  CHECK(r.code == kSat);
  CHECK(r.out == "A(p U q)\n");
}

TEST_CASE("gen writes a model and formula that check") {
  const std::string prefix = scratch("mesh5").string();
  const Run g = run({"gen", "mesh", "--k", "5", "-o", prefix});
  REQUIRE(g.code == kSat);
  CHECK(g.out == prefix + ".wta\n" + prefix + ".tol\n");
  const Run c = run({"check", prefix + ".wta", "-F", prefix + ".tol"});
  CHECK(c.code == kSat);
  const Run o = run({"oracle", prefix + ".wta", "-F", prefix + ".tol"});
  CHECK(o.code == kSat);
  CHECK(o.out == "SAT\n");
}

TEST_CASE("oracle and diff") {
  const Run o = run({"oracle", model("case_study.wta"), "-f", kPhi1});
  CHECK(o.code == kSat);
  const Run d = run({"diff", model("case_study.wta"), "-f", kPhi1});
  CHECK(d.code == kSat);
  CHECK(d.out.find("AGREE") != std::string::npos);
  const Run capped = run({"oracle", model("case_study.wta"), "-f", kPhi1, "--cap", "3"});
  CHECK(capped.code == kOracleScale);
  CHECK(capped.err.rfind("error: ", 0) == 0);
}

TEST_CASE("bench csv to a file") {
  const auto csv = scratch("bench.csv");
  const auto jsonl = scratch("bench.jsonl");
  const Run r = run({"bench", "pipeline", "mesh", "--k", "3,4", "--runs", "5", "--csv", csv.string(), "--jsonl",
                     jsonl.string()});
  CHECK(r.code == kSat);
  std::istringstream in(slurp(csv));
  std::string line;
  std::getline(in, line);
  CHECK(line == "case,k,runtime_ms_mean,runtime_ms_std,mem_kb_mean,mem_kb_std,verdict");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 4);
  std::istringstream js(slurp(jsonl));
  std::size_t runs = 0;
  while (std::getline(js, line)) ++runs;
  CHECK(runs == 20);
}
