#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "specdisc/cli.hpp"
#include "specdisc/io.hpp"

using namespace specdisc;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "specdisc");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string write_model(const std::string& name, const std::string& text) {
  const fs::path dir = fs::temp_directory_path() / "specdisc_cli_tests";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream(p) << text;
  return p.string();
}

const char* kLinearKilled =
    R"({"kind": "discrete", "name": "linear", "a": "(n+1)/4", "b": "(n+1)/4", "c": "9*(n+1)/16"})";

}  // namespace

TEST_CASE("analyze reports the verdict with its evidence") {
  const std::string m = write_model("linear.json", kLinearKilled);
  const Run r = run({"analyze", "--model", m, "--mode", "min", "--n-max", "100000"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["report"]["verdict"] == "DiscreteMin");
  CHECK(j["report"]["min_part"]["trace_log"].size() > 10);
  CHECK(j["report"]["series"].contains("mu_h2"));
}

TEST_CASE("reports are byte-identical across runs") {
  const std::string m = write_model("linear.json", kLinearKilled);
  const Run a = run({"analyze", "--model", m, "--n-max", "2000", "--sufficient"});
  const Run b = run({"analyze", "--model", m, "--n-max", "2000", "--sufficient"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("bad input exits with 2") {
  const std::string zero_birth = write_model("zero.json", R"({"kind": "discrete", "a": "1", "b": "n", "c": "0"})");
  const Run r = run({"analyze", "--model", zero_birth});
  CHECK(r.code == 2);
  CHECK(r.err.find("b_0") != std::string::npos);

  CHECK(run({"analyze", "--model", zero_birth, "--bogus"}).code == 2);
  CHECK(run({"analyze"}).code == 2);
  CHECK(run({"analyze", "--model", "/nonexistent/model.json"}).code == 2);
  const std::string extra = write_model("extra.json", R"({"kind": "discrete", "a": "1", "b": "1", "colour": "red"})");
  CHECK(run({"analyze", "--model", extra}).code == 2);
  const std::string ext = write_model("ext.json", R"({"a": [1, 2], "b": "1", "extension": "formula"})");
  CHECK(run({"analyze", "--model", ext}).code == 2);
  const std::string killed = write_model("killed.json", kLinearKilled);
  CHECK(run({"dual", "--model", killed}).code == 2);
  CHECK(run({"analyze", "--model", killed, "--mode", "sideways"}).code == 2);
}

TEST_CASE("required convergence failure exits with 4") {
  const std::string m = write_model(
      "osc.json", R"({"kind": "continuous", "a": "1", "b": "0", "c": "x^2 + 1", "domain": "wholeline"})");
  const Run r = run({"continuous", "--model", m, "--x-max", "10", "--max-iter", "2"});
  CHECK(r.code == 4);
}

TEST_CASE("failed residual checks exit with 3") {
  const std::string m = write_model("steep.json", R"({"kind": "discrete", "a": "1e6", "b": "1e-3", "c": "0"})");
  const Run r = run({"poisson", "--model", m, "--n-max", "100"});
  CHECK(r.code == 3);
}

TEST_CASE("continuous subcommand with a Picard harmonic function") {
  const std::string m = write_model(
      "osc.json", R"({"kind": "continuous", "a": "1", "b": "0", "c": "x^2 + 1", "domain": "wholeline"})");
  const Run r = run({"continuous", "--model", m, "--x-max", "4", "--mode", "min", "--max-iter", "2000"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["harmonic"]["sign_changes"] == 0);
  CHECK(j["report"]["verdict"] == "DiscreteMin");
  const Run psi = run({"continuous", "--model", m, "--x-max", "10", "--psi", "x^2/2", "--mode", "min"});
  REQUIRE(psi.code == 0);
  CHECK(json::parse(psi.out)["report"]["verdict"] == "DiscreteMin");
}

TEST_CASE("harmonic, poisson, dual and oracle outputs") {
  const std::string m = write_model("linear.json", kLinearKilled);
  const Run h = run({"harmonic", "--model", m, "--n-max", "20"});
  REQUIRE(h.code == 0);
  CHECK(h.out.rfind("n,r_n,log_h_n,bound_b01,bound_applicable\n", 0) == 0);

  const std::string flat = write_model("flat.json", R"({"kind": "discrete", "a": "n", "b": "n+1", "c": "0"})");
  const Run p = run({"poisson", "--model", flat, "--n-max", "10", "--f", "0"});
  REQUIRE(p.code == 0);
  CHECK(p.out.find("10,1\n") != std::string::npos);
  const Run pa = run({"poisson", "--model", flat, "--n-max", "3", "--f", "[1, 2, 3]", "--format", "json"});
  REQUIRE(pa.code == 0);
  CHECK(json::parse(pa.out)["g"].size() == 4);

  const Run d = run({"dual", "--model", flat, "--n-max", "500"});
  REQUIRE(d.code == 0);
  const json dj = json::parse(d.out);
  CHECK(dj["identities"]["mu_vs_a0_nu_hat_star"].get<double>() < 1e-13);
  CHECK(dj["identities"]["nu_hat_a0_vs_mu_star"].get<double>() < 1e-13);
  CHECK(dj["similarity"]["interior_deviation"].get<double>() < 1e-10);

  const Run o = run({"oracle", "--model", m, "--truncations", "50,100", "--num-eigs", "3"});
  REQUIRE(o.code == 0);
  CHECK(std::count(o.out.begin(), o.out.end(), '\n') == 7);
  CHECK(run({"oracle", "--model", m, "--truncations", "50,x"}).code == 2);
}

TEST_CASE("examples subcommand filters by name") {
  const Run r = run({"examples", "--name", "quartic"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("1/1 entries match") != std::string::npos);
}

TEST_CASE("output file option") {
  const std::string m = write_model("linear.json", kLinearKilled);
  const std::string out = (fs::temp_directory_path() / "specdisc_cli_tests" / "report.json").string();
  const Run r = run({"--output", out, "analyze", "--model", m, "--n-max", "1000"});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream f(out);
  CHECK(json::parse(f)["report"]["verdict"] == "DiscreteMin");
}
