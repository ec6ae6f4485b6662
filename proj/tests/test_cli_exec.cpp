#include <cstdio>
#include <string>
#include <sys/wait.h>

#include "doctest.h"

namespace {

struct CmdResult {
  int exit_code = -1;
  std::string out;
};

CmdResult run_cli(const std::string& args) {
  const std::string cmd = std::string(RPSEMI_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CmdResult r;
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  if (WIFEXITED(status)) r.exit_code = WEXITSTATUS(status);
  return r;
}

}  // namespace

TEST_CASE("cli: help and usage errors") {
  CHECK(run_cli("--help").exit_code == 0);
  CHECK(run_cli("width --help").exit_code == 0);
  CHECK(run_cli("verify --suite bogus --paths 10").exit_code == 2);
  CHECK(run_cli("width --compact diagonal").exit_code == 2);  // missing --t-grid
  CHECK(run_cli("exact --quantity survival-inv-width --t 0.3").exit_code == 2);
  CHECK(run_cli("nope").exit_code == 2);
}

TEST_CASE("cli: exact evaluator prints pinned scalars") {
  CmdResult r = run_cli("exact --quantity survival-inv-width --t 0.3 --n 2");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "0.740818220682\n");

  r = run_cli("exact --quantity mean-width-diag --t 0");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "0\n");

  r = run_cli("exact --quantity mean-width-diag --t 0.1");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "0.332744621105\n");

  r = run_cli("exact --quantity c-of-t --t 0.5");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "0.134859379483\n");
}

TEST_CASE("cli: width emits the CSV contract") {
  const std::string cmd =
      "width --compact diagonal --t-grid 0.5,0.1 --paths 2000 --seed 42 --exact";
  const CmdResult r = run_cli(cmd);
  CHECK(r.exit_code == 0);
  const std::string header =
      "quantity,t,mc_mean,mc_stderr,exact,asymptote,ratio,censored_fraction\n";
  REQUIRE(r.out.size() > header.size());
  CHECK(r.out.substr(0, header.size()) == header);
  // The grid is sorted: t=0.1 row comes first despite the flag order.
  CHECK(r.out.find("width_diag,0.1,") != std::string::npos);
  CHECK(r.out.find("width_diag,0.5,") != std::string::npos);
  CHECK(r.out.find(",0.332744621105,") != std::string::npos);  // exact column
}

TEST_CASE("cli: outputs are byte-stable across runs and worker counts") {
  const std::string base =
      "width --compact ellipsoid --t-grid 0.1,0.5 --paths 3000 --seed 7 --exact";
  const CmdResult a = run_cli(base);
  const CmdResult b = run_cli(base);
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
  const CmdResult w1 = run_cli(base + " --workers 1");
  const CmdResult w4 = run_cli(base + " --workers 4");
  CHECK(w1.out == w4.out);
  CHECK(a.out == w1.out);

  const std::string dim = "dimension --t-grid 0.5 --paths 3000 --seed 9";
  CHECK(run_cli(dim).out == run_cli(dim + " --workers 4").out);
}

TEST_CASE("cli: randomop demo reports") {
  const CmdResult r =
      run_cli("randomop --demo point-eval --family rademacher --n 500 --seed 9");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"nonvanishing_fraction\": 1.0") != std::string::npos);
  CHECK(r.out.find("\"second_moment_estimate\": 1.0") != std::string::npos);
  CHECK(r.out.find("\"trials\": 500") != std::string::npos);

  const CmdResult p = run_cli("randomop --demo poisson-condexp --rate 4 --grid 64 --seed 3");
  CHECK(p.exit_code == 0);
  CHECK(p.out.find("\"rank\"") != std::string::npos);
  CHECK(p.out.find("\"hs_full_sum\"") != std::string::npos);
}
