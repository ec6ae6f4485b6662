// Acceptance harness: runs the full verification battery once and reports one
// pass/fail line per criterion of the published checklist, plus byte-identity
// checks of the CLI itself. Exits nonzero if anything fails.

#include <cstdio>
#include <cstdlib>
#include <map>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "rpsemi/verify.hpp"

namespace {

struct Criterion {
  int number;
  const char* title;
  std::vector<std::string> check_ids;
};

struct CmdResult {
  int exit_code = -1;
  std::string out;
};

CmdResult run_cli(const std::string& args) {
  const std::string cmd = std::string(RPSEMI_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  CmdResult r;
  if (pipe == nullptr) return r;
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  if (WIFEXITED(status)) r.exit_code = WEXITSTATUS(status);
  return r;
}

// Criterion 13 covers the CLI surface as well as the engine: repeated runs and
// different worker counts must produce identical bytes.
bool cli_byte_identity(std::string* details) {
  const std::vector<std::string> commands = {
      "width --compact diagonal --t-grid 0.1,0.5 --paths 20000 --seed 42 --exact",
      "width --compact ellipsoid --t-grid 0.1,0.5 --paths 20000 --seed 42 --exact",
      "dimension --t-grid 0.5 --paths 20000 --seed 42",
      "verify --suite widths --paths 4000 --seed 7",
  };
  for (const std::string& cmd : commands) {
    const CmdResult a = run_cli(cmd);
    const CmdResult b = run_cli(cmd);
    const CmdResult w1 = run_cli(cmd + " --workers 1");
    const CmdResult w8 = run_cli(cmd + " --workers 8");
    if (a.exit_code < 0 || a.exit_code != b.exit_code || a.out != b.out) {
      *details = "rerun of `" + cmd + "` changed output";
      return false;
    }
    if (w1.exit_code != w8.exit_code || w1.out != w8.out || a.out != w1.out) {
      *details = "worker count changed output of `" + cmd + "`";
      return false;
    }
  }
  *details = "4 commands, reruns and workers 1/8 byte-identical";
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  rpsemi::verify::VerifyOptions opts;
  opts.paths = 100000;
  opts.fields = 10000;
  opts.master_seed = 7;
  if (argc > 1) opts.paths = std::strtoull(argv[1], nullptr, 10);
  if (argc > 2) opts.fields = std::strtoull(argv[2], nullptr, 10);

  std::printf("running full verification battery (paths=%llu, fields=%llu)...\n",
              static_cast<unsigned long long>(opts.paths),
              static_cast<unsigned long long>(opts.fields));
  std::fflush(stdout);

  const std::vector<rpsemi::verify::CheckResult> results =
      rpsemi::verify::run_suite("all", opts);
  std::map<std::string, const rpsemi::verify::CheckResult*> by_id;
  for (const auto& r : results) by_id[r.id] = &r;

  const std::vector<Criterion> criteria = {
      {1,
       "field realization: exact composition, identity, idempotent 0/1 diagonal",
       {"semigroup.compose_identity"}},
      {2,
       "stationary survival exp(-kh) and independence over disjoint windows",
       {"semigroup.stationarity", "semigroup.disjoint_independence"}},
      {3,
       "diagonal width mean: MC vs series vs quadrature",
       {"widths.diag_mc_vs_exact", "widths.diag_series_quadrature"}},
      {4,
       "diagonal width over t|ln t| decreases toward 1; variance ratio vanishes",
       {"widths.diag_ratio_mean", "widths.diag_ratio_var"}},
      {5,
       "diagonal width variance value and zeta(3) t bound",
       {"widths.diag_var_exact"}},
      {6,
       "ellipsoid width: minimal-kill law chi-square and mean vs series",
       {"widths.ell_min_kill_gof", "widths.ell_mc_vs_exact"}},
      {7,
       "ellipsoid width over t|ln t|/2 approaches 1",
       {"widths.ell_ratio"}},
      {8,
       "dimension: mean, Poisson-binomial pmf, void probability",
       {"dimension.alpha_mean", "dimension.alpha_pmf_gof", "dimension.alpha_zero_prob"}},
      {9,
       "dimension tail bound exp(-nt)(1 + (1-1/e)/t)",
       {"dimension.tail_bound"}},
      {10,
       "void-probability scale t ln c(t): values, eta route, one-sided bound",
       {"dimension.c_scale_values", "dimension.c_eta_crosscheck",
        "dimension.c_one_sided"}},
      {11,
       "pathwise link: width >= 1/(dimension + 1)",
       {"widths.alpha_width_link"}},
      {12,
       "conditional-expectation projections and point-evaluation demo",
       {"randomop.projection_props", "randomop.spectrum", "randomop.hs_criterion",
        "randomop.refinement", "randomop.point_eval"}},
      {13,
       "byte-identical reproducibility across runs and worker counts",
       {"repro.engine_workers", "repro.stream_determinism"}},
  };

  bool all_pass = true;
  for (const Criterion& c : criteria) {
    bool pass = true;
    std::string detail;
    for (const std::string& id : c.check_ids) {
      const auto it = by_id.find(id);
      if (it == by_id.end()) {
        pass = false;
        detail += "[missing check " + id + "] ";
        continue;
      }
      if (!it->second->passed) {
        pass = false;
        detail += "[" + id + ": " + it->second->details + "] ";
      }
    }
    if (c.number == 13 && pass) {
      std::string cli_detail;
      if (!cli_byte_identity(&cli_detail)) {
        pass = false;
        detail += "[cli: " + cli_detail + "] ";
      }
    }
    all_pass = all_pass && pass;
    std::printf("criterion %2d: %s - %s%s%s\n", c.number, pass ? "pass" : "FAIL",
                c.title, detail.empty() ? "" : " ", detail.c_str());
    std::fflush(stdout);
  }

  std::printf(all_pass ? "acceptance: all criteria pass\n"
                       : "acceptance: FAILURES present\n");
  return all_pass ? 0 : 1;
}
